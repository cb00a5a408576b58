#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hinn/error.hpp"
#include "hinn/stats.hpp"

using namespace hinn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("mean and standard deviations on hand values") {
  CHECK_THAT(mean({2.0, 4.0}), WithinAbs(3.0, 0.0));
  CHECK_THAT(mean({1.0, 2.0, 3.0, 4.0}), WithinAbs(2.5, 0.0));
  CHECK_THAT(sample_std({2.0, 4.0}), WithinRel(std::sqrt(2.0), 1e-15));
  CHECK_THAT(sample_std({5.0, 5.0, 5.0}), WithinAbs(0.0, 0.0));
  CHECK_THAT(population_std({1.0, 2.0, 3.0}), WithinRel(std::sqrt(2.0 / 3.0), 1e-15));
  CHECK_THROWS_AS(sample_std({1.0}), ConfigError);
  CHECK_THROWS_AS(mean({}), ConfigError);
}

TEST_CASE("normal cdf hits the textbook quantiles") {
  CHECK_THAT(normal_cdf(0.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(normal_cdf(1.96), WithinRel(0.9750021048517795, 1e-12));
  CHECK_THAT(normal_cdf(-1.96) + normal_cdf(1.96), WithinAbs(1.0, 1e-12));
  CHECK(normal_cdf(10.0) > 1.0 - 1e-15);
  CHECK(normal_cdf(-10.0) < 1e-15);
}

TEST_CASE("regularized incomplete beta on closed-form cases") {
  // I_x(2,3) integrates the Beta(2,3) density 12 x (1-x)^2
  CHECK_THAT(ibeta(2.0, 3.0, 0.5), WithinRel(0.6875, 1e-12));
  CHECK_THAT(ibeta(1.0, 1.0, 0.25), WithinRel(0.25, 1e-12));  // uniform
  CHECK_THAT(ibeta(2.0, 2.0, 0.5), WithinAbs(0.5, 1e-12));    // symmetric density
  CHECK_THAT(ibeta(3.0, 1.0, 0.7), WithinRel(0.343, 1e-12));  // x^3
  CHECK(ibeta(2.0, 3.0, 0.0) == 0.0);
  CHECK(ibeta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("t cdf reduces to known distributions") {
  CHECK_THAT(t_cdf(0.0, 5.0), WithinAbs(0.5, 1e-15));
  // one degree of freedom is the Cauchy distribution: F(1) = 3/4
  CHECK_THAT(t_cdf(1.0, 1.0), WithinRel(0.75, 1e-12));
  CHECK_THAT(t_cdf(-1.0, 1.0), WithinRel(0.25, 1e-12));
  // symmetry at arbitrary points
  CHECK_THAT(t_cdf(1.7, 8.0) + t_cdf(-1.7, 8.0), WithinAbs(1.0, 1e-12));
  // heavy tails: smaller df has more mass beyond 2
  CHECK(t_cdf(2.0, 1.0) < t_cdf(2.0, 30.0));
}

TEST_CASE("t quantile matches frozen table values") {
  CHECK_THAT(t_quantile(0.975, 1.0), WithinRel(12.706204736432095, 1e-9));
  CHECK_THAT(t_quantile(0.975, 29.0), WithinRel(2.045229642132703, 1e-9));
  CHECK_THAT(t_quantile(0.5, 7.0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(t_quantile(0.025, 29.0), WithinRel(-2.045229642132703, 1e-9));
}

TEST_CASE("t quantile inverts the cdf across df values") {
  for (double df : {1.0, 2.0, 5.0, 29.0, 100.0}) {
    for (double p : {0.6, 0.9, 0.975, 0.999}) {
      const double t = t_quantile(p, df);
      CHECK_THAT(t_cdf(t, df), WithinAbs(p, 1e-10));
    }
  }
}
