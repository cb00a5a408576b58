#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hinn/error.hpp"

namespace hinn {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw ConfigError("mean: empty input");
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

// Sample standard deviation (n − 1 divisor), as used for confidence intervals.
inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) throw ConfigError("sample_std: need at least 2 values");
  const double mu = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Population standard deviation (n divisor), as used by Gaussian normalization.
inline double population_std(const std::vector<double>& v) {
  const double mu = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz's algorithm).
inline double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(log_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::beta_cf(a, b, x) / a;
  return 1.0 - bt * detail::beta_cf(b, a, 1.0 - x) / b;
}

// CDF of Student's t with df degrees of freedom.
inline double t_cdf(double t, double df) {
  if (df <= 0.0) throw ConfigError("t_cdf: degrees of freedom must be positive");
  const double x = df / (df + t * t);
  const double tail = 0.5 * ibeta(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

// Quantile of Student's t by bracketing + bisection on the CDF. Plenty fast
// for the handful of evaluations per experiment summary, and accurate to the
// last bit or two.
inline double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("t_quantile: p must lie in (0, 1)");
  if (df <= 0.0) throw ConfigError("t_quantile: degrees of freedom must be positive");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);
  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, df) < p) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf(mid, df) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hinn
