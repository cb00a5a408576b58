#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/explain.hpp"
#include "hinn/model.hpp"
#include "hinn/rng.hpp"
#include "hinn/tuning.hpp"

using namespace hinn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

void silence_block(Block& blk) {
  for (Matrix& w : blk.w) std::fill(w.data.begin(), w.data.end(), 0.0);
  std::fill(blk.head_w.begin(), blk.head_w.end(), 0.0);
  blk.head_b = 0.0;
  std::fill(blk.embed_w.data.begin(), blk.embed_w.data.end(), 0.0);
}

// Every block outputs a fixed constant regardless of the input.
HinnModel constant_heads_model(const std::vector<double>& head_biases, std::size_t n) {
  Hyperparams hp;
  hp.m = static_cast<int>(head_biases.size());
  hp.l = 1;
  hp.d = 3;
  hp.mode = Mode::hinn;
  Rng rng(1);
  HinnModel model = new_model(n, hp, rng);
  for (std::size_t j = 0; j < model.blocks.size(); ++j) {
    silence_block(model.blocks[j]);
    model.blocks[j].head_b = head_biases[j];
  }
  model.normalizer = identity_normalizer(n, NormMethod::maximization);
  model.option_names.assign(n, "o");
  return model;
}

// f(o) = 2 o1 + 3 o2 + 5 on the nonnegative orthant: the single hidden layer
// passes the options through untouched ReLUs.
HinnModel affine_model() {
  Hyperparams hp;
  hp.m = 1;
  hp.l = 1;
  hp.d = 2;
  hp.mode = Mode::hinn;
  Rng rng(2);
  HinnModel model = new_model(2, hp, rng);
  silence_block(model.blocks[0]);
  model.blocks[0].w[0].data = {1.0, 0.0, 0.0, 1.0};
  model.blocks[0].head_w = {2.0, 3.0};
  model.blocks[0].head_b = 5.0;
  model.normalizer = identity_normalizer(2, NormMethod::maximization);
  model.option_names = {"first", "second"};
  return model;
}

// f(o) = relu(o - 0.5): one hidden unit, one kink halfway along the path to 1.
HinnModel kink_model() {
  Hyperparams hp;
  hp.m = 1;
  hp.l = 1;
  hp.d = 1;
  hp.mode = Mode::hinn;
  Rng rng(3);
  HinnModel model = new_model(1, hp, rng);
  silence_block(model.blocks[0]);
  model.blocks[0].w[0].data = {1.0};
  model.blocks[0].b[0] = {-0.5};
  model.blocks[0].head_w = {1.0};
  model.normalizer = identity_normalizer(1, NormMethod::maximization);
  model.option_names = {"o"};
  return model;
}

Dataset test_rows(const Matrix& x) {
  Dataset ds;
  ds.options.assign(x.cols, {"o", OptionKind::numeric});
  ds.perf_name = "perf";
  ds.x = x;
  ds.y.assign(x.rows, 1.0);
  return ds;
}

}  // namespace

TEST_CASE("a single block owns the whole prediction") {
  const HinnModel model = constant_heads_model({3.0}, 2);
  Matrix x(3, 2);
  x.data = {1.0, 0.0, 0.0, 1.0, 1.0, 1.0};
  const Vector c = partial_contributions(model, test_rows(x));
  REQUIRE(c.size() == 1);
  CHECK(c[0] == 1.0);
}

TEST_CASE("contributions are the average share of each block's output") {
  const HinnModel model = constant_heads_model({3.0, 1.0}, 2);
  Matrix x(4, 2);
  x.data = {1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  const Vector c = partial_contributions(model, test_rows(x));
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 0.75);
  CHECK(c[1] == 0.25);
}

TEST_CASE("the normalization offset is charged to the first block") {
  HinnModel model = constant_heads_model({3.0, 1.0}, 2);
  model.normalizer.method = NormMethod::gaussian;
  model.normalizer.y_scale = 2.0;
  model.normalizer.y_offset = 8.0;
  Matrix x(2, 2);
  x.data = {1.0, 0.0, 0.0, 1.0};
  const Vector c = partial_contributions(model, test_rows(x));
  // denormalized block outputs: 2*3 + 8 = 14 and 2*1 = 2
  CHECK(c[0] == 0.875);
  CHECK(c[1] == 0.125);
  CHECK_THAT(c[0] + c[1], WithinRel(1.0, 1e-15));
}

TEST_CASE("contribution shares always sum to one") {
  Hyperparams hp;
  hp.m = 3;
  hp.l = 2;
  hp.d = 5;
  Rng rng(17);
  HinnModel model = new_model(3, hp, rng);
  model.normalizer = identity_normalizer(3, NormMethod::maximization);
  Matrix x(20, 3);
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  const Vector c = partial_contributions(model, test_rows(x));
  REQUIRE(c.size() == 3);
  double total = 0.0;
  for (double v : c) total += v;
  CHECK_THAT(total, WithinRel(1.0, 1e-12));
}

TEST_CASE("rows with a zero total prediction are excluded, never divided by") {
  // f(o) = relu(o): the o = 0 row contributes nothing to the shares
  HinnModel model = kink_model();
  model.blocks[0].b[0] = {0.0};
  Matrix x(3, 1);
  x.data = {2.0, 0.0, 3.0};
  std::size_t excluded = 99;
  const Vector c = partial_contributions(model, test_rows(x), &excluded);
  CHECK(c[0] == 1.0);
  CHECK(excluded == 1);

  Matrix zeros(2, 1);
  CHECK_THROWS_AS(partial_contributions(model, test_rows(zeros)), DataError);
  Dataset empty = test_rows(Matrix(0, 1));
  CHECK_THROWS_AS(partial_contributions(model, empty), DataError);
}

TEST_CASE("integrated gradients are exact for an affine surface") {
  const HinnModel model = affine_model();
  const Vector o{0.7, 1.3};
  const Vector s300 = integrated_gradients(model, o, -1, 300);
  const Vector s1 = integrated_gradients(model, o, -1, 1);
  REQUIRE(s300.size() == 2);
  CHECK(s300[0] == 2.0 * o[0]);
  CHECK(s300[1] == 3.0 * o[1]);
  CHECK(s1 == s300);  // a constant integrand needs only one sample
}

TEST_CASE("the midpoint rule lands exactly where the kink predicts") {
  const HinnModel model = kink_model();
  // f(1) - f(0) = 0.5; the gradient is 1 past the halfway point, 0 before
  const Vector s10 = integrated_gradients(model, {1.0}, -1, 10);
  CHECK(s10[0] == 0.5);
  // odd step counts sample the kink itself: 3 midpoints see gradients 0, 0, 1
  const Vector s3 = integrated_gradients(model, {1.0}, -1, 3);
  CHECK_THAT(s3[0], WithinRel(1.0 / 3.0, 1e-15));
}

TEST_CASE("step count matters once the surface curves") {
  Hyperparams hp;
  hp.m = 2;
  hp.l = 2;
  hp.d = 5;
  Rng rng(23);
  HinnModel model = new_model(3, hp, rng);
  model.normalizer = identity_normalizer(3, NormMethod::maximization);
  const Vector o{0.9, -0.8, 0.7};
  CHECK(integrated_gradients(model, o, -1, 1) != integrated_gradients(model, o, -1, 300));
}

TEST_CASE("options with no path into the network score exactly zero") {
  Hyperparams hp;
  hp.m = 3;
  hp.l = 2;
  hp.d = 4;
  Rng rng(29);
  HinnModel model = new_model(3, hp, rng);
  model.normalizer = identity_normalizer(3, NormMethod::maximization);
  model.option_names = {"a", "dead", "c"};
  // sever option 1: zero its input row in every block's first layer
  for (Block& blk : model.blocks) {
    for (std::size_t t = 0; t < blk.w[0].cols; ++t) blk.w[0](1, t) = 0.0;
  }

  const Vector s = integrated_gradients(model, {0.5, 0.9, -0.4}, -1, 50);
  CHECK(s[1] == 0.0);
  CHECK(s[0] != 0.0);

  Matrix x(6, 3);
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  const Matrix sig = block_significance(model, test_rows(x), 20);
  REQUIRE(sig.rows == 3);
  REQUIRE(sig.cols == 3);
  for (std::size_t j = 0; j < sig.cols; ++j) CHECK(sig(1, j) == 0.0);
}

TEST_CASE("the full report ties contributions, significance and completeness together") {
  const HinnModel model = affine_model();
  Matrix x(3, 2);
  x.data = {0.5, 1.0, 1.5, 0.25, 2.0, 2.0};
  const AttributionReport rep = attribution_report(model, test_rows(x), 10);

  CHECK(rep.steps == 10);
  CHECK(rep.excluded_rows == 0);
  CHECK(rep.option_names == std::vector<std::string>{"first", "second"});
  REQUIRE(rep.contributions.size() == 1);
  CHECK(rep.contributions[0] == 1.0);

  // the affine integrand makes attribution exact, so the residual is rounding
  CHECK(rep.completeness_gap < 1e-12);

  // single block: the significance column is the mean full attribution
  REQUIRE(rep.significance.rows == 2);
  REQUIRE(rep.significance.cols == 1);
  const double mean_first = 2.0 * (0.5 + 1.5 + 2.0) / 3.0;
  const double mean_second = 3.0 * (1.0 + 0.25 + 2.0) / 3.0;
  CHECK_THAT(rep.significance(0, 0), WithinRel(mean_first, 1e-12));
  CHECK_THAT(rep.significance(1, 0), WithinRel(mean_second, 1e-12));
}

TEST_CASE("per-block attributions chain only through upstream blocks") {
  Hyperparams hp;
  hp.m = 3;
  hp.l = 1;
  hp.d = 4;
  Rng rng(31);
  HinnModel model = new_model(2, hp, rng);
  model.normalizer = identity_normalizer(2, NormMethod::maximization);
  const Vector o{0.8, 0.6};

  // the per-block scores decompose the full-model score
  const Vector full = integrated_gradients(model, o, -1, 64);
  Vector stacked(2, 0.0);
  for (int j = 0; j < 3; ++j) {
    const Vector part = integrated_gradients(model, o, j, 64);
    for (std::size_t i = 0; i < 2; ++i) stacked[i] += part[i];
  }
  CHECK_THAT(stacked[0], WithinRel(full[0], 1e-10));
  CHECK_THAT(stacked[1], WithinRel(full[1], 1e-10));

  CHECK_THROWS_AS(integrated_gradients(model, o, 3, 64), ConfigError);
  CHECK_THROWS_AS(integrated_gradients(model, {1.0, 2.0, 3.0}, -1, 64), ShapeError);
  CHECK_THROWS_AS(integrated_gradients(model, o, -1, 0), ConfigError);
}

TEST_CASE("a trained model attributes the signal to the option that carries it") {
  Rng rng(37);
  Dataset ds;
  ds.options = {{"main", OptionKind::binary},
                {"idle1", OptionKind::binary},
                {"idle2", OptionKind::binary}};
  ds.perf_name = "perf";
  ds.x = Matrix(60, 3);
  ds.y.resize(60);
  for (std::size_t r = 0; r < 60; ++r) {
    for (std::size_t i = 0; i < 3; ++i) ds.x(r, i) = rng.next_double() < 0.5 ? 0.0 : 1.0;
    ds.y[r] = 4.0 * ds.x(r, 0) + 1.0 + rng.normal(0.0, 0.05);
  }
  const SplitSample sample = split(ds, 40, 101);

  Hyperparams hp;
  hp.m = 1;
  hp.l = 1;
  hp.d = 8;
  hp.lambda = 0.01;
  hp.epochs = 800;
  hp.normalization = NormMethod::maximization;
  TrainReport report;
  const HinnModel model = detail::fit_one(sample, hp, 7, report);

  const AttributionReport rep = attribution_report(model, sample.test, 300);
  const double main_score = std::fabs(rep.significance(0, 0));
  const double idle = std::max(std::fabs(rep.significance(1, 0)), std::fabs(rep.significance(2, 0)));
  CHECK(main_score > 3.0 * idle);
  CHECK(rep.completeness_gap < 0.05);
}
