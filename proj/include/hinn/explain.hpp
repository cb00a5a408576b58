#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/matrix.hpp"
#include "hinn/model.hpp"
#include "hinn/training.hpp"

namespace hinn {

struct AttributionReport {
  Vector contributions;                   // per-block P_{f_j}, fractions (may be negative)
  Matrix significance;                    // options x blocks, denormalized performance units
  std::vector<std::string> option_names;  // row labels for `significance`
  std::size_t steps = 0;
  double completeness_gap = 0.0;   // worst per-row relative residual of the completeness identity
  std::size_t excluded_rows = 0;  // test rows dropped from `contributions` (zero total)
};

namespace detail {

inline Vector matrix_row(const Matrix& m, std::size_t r) {
  Vector v(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) v[c] = m(r, c);
  return v;
}

// Per-row denormalized block outputs. Scaling applies to every block; the
// additive offset of gaussian normalization belongs to no block in
// particular, so it rides with block 1 — that convention keeps the fractions
// summing to 1.
inline Matrix denormalized_partials(const HinnModel& model, const Matrix& partials) {
  Matrix d(partials.rows, partials.cols);
  for (std::size_t r = 0; r < partials.rows; ++r) {
    for (std::size_t j = 0; j < partials.cols; ++j) {
      d(r, j) = model.normalizer.y_scale * partials(r, j) + (j == 0 ? model.normalizer.y_offset : 0.0);
    }
  }
  return d;
}

}  // namespace detail

// Average share of the denormalized prediction produced by each block over
// the test rows. Rows whose total prediction is exactly zero carry an
// undefined share and are excluded (callers can surface the count).
inline Vector partial_contributions(const HinnModel& model, const Dataset& test,
                                    std::size_t* excluded_rows = nullptr) {
  if (test.rows() == 0) throw DataError("partial_contributions: test set is empty");
  const Matrix xn = model.normalizer.apply_x(test.x);
  const BatchTrace trace = forward_batch(model, xn, FwdOptions{});
  const Matrix d = detail::denormalized_partials(model, trace.partials);

  const std::size_t m = model.hp.m;
  Vector acc(m, 0.0);
  std::size_t included = 0;
  std::size_t excluded = 0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) total += d(r, j);
    if (total == 0.0) {
      ++excluded;
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) acc[j] += d(r, j) / total;
    ++included;
  }
  if (excluded_rows != nullptr) *excluded_rows = excluded;
  if (included == 0) {
    throw DataError("partial_contributions: every test row has a zero denormalized prediction");
  }
  for (double& v : acc) v /= static_cast<double>(included);
  return acc;
}

// Integrated Gradients along the straight line from the zero configuration to
// `o`, both in original option units. The integral is a midpoint Riemann sum;
// gradients are taken through the normalizer so scores attribute in original
// units and sum (in the limit) to the denormalized f(o) - f(0).
inline Vector integrated_gradients(const HinnModel& model, const Vector& o, int target_block = -1,
                                   std::size_t steps = 300) {
  if (o.size() != model.n) {
    throw ShapeError("integrated_gradients: input has " + std::to_string(o.size()) +
                     " options, model expects " + std::to_string(model.n));
  }
  if (steps < 1) throw ConfigError("integrated_gradients: steps must be >= 1");

  Matrix path(steps, model.n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double alpha = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
    for (std::size_t i = 0; i < model.n; ++i) path(k, i) = alpha * o[i];
  }
  const Matrix grads = input_gradients(model, model.normalizer.apply_x(path), target_block);

  Vector scores(model.n, 0.0);
  for (std::size_t i = 0; i < model.n; ++i) {
    double g = 0.0;
    for (std::size_t k = 0; k < steps; ++k) g += grads(k, i);
    g /= static_cast<double>(steps);
    scores[i] = o[i] * model.normalizer.y_scale * g / model.normalizer.x_scale[i];
  }
  return scores;
}

// Option-by-block significance: column j is the mean over test rows of the
// IG attribution when only block j's output is the target (chained through
// the upstream embeddings it consumes).
inline Matrix block_significance(const HinnModel& model, const Dataset& test,
                                 std::size_t steps = 300) {
  if (test.rows() == 0) throw DataError("block_significance: test set is empty");
  const std::size_t m = model.hp.m;
  Matrix sig(model.n, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector acc(model.n, 0.0);
    for (std::size_t r = 0; r < test.rows(); ++r) {
      const Vector s =
          integrated_gradients(model, detail::matrix_row(test.x, r), static_cast<int>(j), steps);
      for (std::size_t i = 0; i < model.n; ++i) acc[i] += s[i];
    }
    for (std::size_t i = 0; i < model.n; ++i) {
      sig(i, j) = acc[i] / static_cast<double>(test.rows());
    }
  }
  return sig;
}

// Full report: contributions, significance, and the worst-case completeness
// residual so callers can decide whether `steps` was high enough.
inline AttributionReport attribution_report(const HinnModel& model, const Dataset& test,
                                            std::size_t steps = 300) {
  AttributionReport rep;
  rep.steps = steps;
  rep.option_names = model.option_names;
  rep.contributions = partial_contributions(model, test, &rep.excluded_rows);
  rep.significance = block_significance(model, test, steps);

  const Matrix baseline(1, model.n);  // zero configuration in original units
  const double f0 =
      model.normalizer.invert_y(predict_batch(model, model.normalizer.apply_x(baseline))[0]);
  const Matrix xn = model.normalizer.apply_x(test.x);
  const Vector f = model.normalizer.invert_y(predict_batch(model, xn));

  double gap = 0.0;
  for (std::size_t r = 0; r < test.rows(); ++r) {
    const Vector s = integrated_gradients(model, detail::matrix_row(test.x, r), -1, steps);
    double total = 0.0;
    for (double v : s) total += v;
    const double expected = f[r] - f0;
    const double num = std::fabs(total - expected);
    const double residual = expected != 0.0 ? num / std::fabs(expected) : num;
    gap = std::max(gap, residual);
  }
  rep.completeness_gap = gap;
  return rep;
}

}  // namespace hinn
