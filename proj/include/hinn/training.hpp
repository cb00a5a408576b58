#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/matrix.hpp"
#include "hinn/model.hpp"
#include "hinn/rng.hpp"

namespace hinn {

// Gradient tensors, shape-congruent with the model's blocks.
struct BlockGrad {
  std::vector<Matrix> w;
  std::vector<Vector> b;
  Vector head_w;
  double head_b = 0.0;
  Matrix embed_w;
  Vector embed_b;
};

struct GradientSet {
  std::vector<BlockGrad> blocks;
};

inline GradientSet zero_grads_like(const HinnModel& model) {
  GradientSet g;
  for (const Block& blk : model.blocks) {
    BlockGrad bg;
    for (const Matrix& w : blk.w) bg.w.emplace_back(w.rows, w.cols);
    for (const Vector& b : blk.b) bg.b.emplace_back(b.size(), 0.0);
    bg.head_w.assign(blk.head_w.size(), 0.0);
    bg.embed_w = Matrix(blk.embed_w.rows, blk.embed_w.cols);
    bg.embed_b.assign(blk.embed_b.size(), 0.0);
    g.blocks.push_back(std::move(bg));
  }
  return g;
}

// Flat views over every parameter scalar, in a fixed canonical order
// (per block: hidden weights, hidden biases, scalar head, embedding head).
// The optimizer, checkpoints and gradient checks all walk this same order.
using ParamSpans = std::vector<std::pair<double*, std::size_t>>;

inline ParamSpans collect_params(HinnModel& model) {
  ParamSpans spans;
  for (Block& blk : model.blocks) {
    for (Matrix& w : blk.w) spans.emplace_back(w.data.data(), w.data.size());
    for (Vector& b : blk.b) spans.emplace_back(b.data(), b.size());
    spans.emplace_back(blk.head_w.data(), blk.head_w.size());
    spans.emplace_back(&blk.head_b, 1);
    spans.emplace_back(blk.embed_w.data.data(), blk.embed_w.data.size());
    spans.emplace_back(blk.embed_b.data(), blk.embed_b.size());
  }
  return spans;
}

inline ParamSpans collect_params(GradientSet& grads) {
  ParamSpans spans;
  for (BlockGrad& blk : grads.blocks) {
    for (Matrix& w : blk.w) spans.emplace_back(w.data.data(), w.data.size());
    for (Vector& b : blk.b) spans.emplace_back(b.data(), b.size());
    spans.emplace_back(blk.head_w.data(), blk.head_w.size());
    spans.emplace_back(&blk.head_b, 1);
    spans.emplace_back(blk.embed_w.data.data(), blk.embed_w.data.size());
    spans.emplace_back(blk.embed_b.data(), blk.embed_b.size());
  }
  return spans;
}

namespace detail {

inline Vector colsum(const Matrix& m) {
  Vector out(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += m(i, j);
  return out;
}

// Reverse pass through the block chain. head_seed[r] is dJ/df̂_j for every row
// (the same for all selected blocks); target_block < 0 seeds every scalar head,
// otherwise only block target_block — that is how attribution targets a single
// partial function. Gradients w.r.t. parameters land in grads_out (if given);
// gradients w.r.t. the normalized options land in input_grad_out (if given).
//
// The chain rule here mirrors the forward concatenation: the gradient arriving
// at block j+1's input splits into a passthrough part (its first j·n columns,
// which continue down to block j's input) and the part that entered through
// block j's embedding head.
inline void backward_pass(const HinnModel& model, const BatchTrace& trace,
                          const Vector& head_seed, int target_block, GradientSet* grads_out,
                          Matrix* input_grad_out) {
  const std::size_t m = model.blocks.size();
  const std::size_t rows = head_seed.size();
  const bool embeds = uses_embedding(model.hp.mode);

  Matrix gx;         // gradient w.r.t. the current block's input (embedding modes)
  Matrix g_options;  // accumulated gradient w.r.t. the raw options (other modes)
  if (!embeds && input_grad_out != nullptr) g_options = Matrix(rows, model.n);

  const std::size_t start_j =
      target_block >= 0 ? static_cast<std::size_t>(target_block) : m - 1;

  for (std::size_t j = start_j + 1; j-- > 0;) {
    const Block& blk = model.blocks[j];
    const Matrix& h_last = trace.block_h[j].back();
    const bool seeded = target_block < 0 || static_cast<std::size_t>(target_block) == j;

    // dJ/dH_last from the scalar head.
    Matrix dh(rows, h_last.cols);
    if (seeded) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double s = head_seed[r];
        double* drow = &dh.data[r * dh.cols];
        for (std::size_t t = 0; t < dh.cols; ++t) drow[t] = s * blk.head_w[t];
      }
      if (grads_out != nullptr) {
        BlockGrad& bg = grads_out->blocks[j];
        for (std::size_t r = 0; r < rows; ++r) {
          const double s = head_seed[r];
          const double* hrow = &h_last.data[r * h_last.cols];
          for (std::size_t t = 0; t < h_last.cols; ++t) bg.head_w[t] += s * hrow[t];
          bg.head_b += s;
        }
      }
    }

    // dJ/dH_last through the embedding this block fed into block j+1.
    Matrix gpass;
    if (embeds && j + 1 <= start_j && !gx.empty()) {
      const std::size_t own_width = trace.block_x[j].cols;
      gpass = slice_cols(gx, 0, own_width);
      Matrix de = slice_cols(gx, own_width, model.n);
      const Matrix& e = trace.block_e[j];
      for (std::size_t t = 0; t < de.data.size(); ++t) {
        if (e.data[t] <= 0.0) de.data[t] = 0.0;
      }
      if (grads_out != nullptr) {
        BlockGrad& bg = grads_out->blocks[j];
        Matrix gw = matmul_at_b(h_last, de);
        for (std::size_t t = 0; t < gw.data.size(); ++t) bg.embed_w.data[t] += gw.data[t];
        const Vector gb = colsum(de);
        for (std::size_t t = 0; t < gb.size(); ++t) bg.embed_b[t] += gb[t];
      }
      const Matrix back = matmul_a_bt(de, blk.embed_w);
      for (std::size_t t = 0; t < dh.data.size(); ++t) dh.data[t] += back.data[t];
    }

    // Hidden layers, last to first. Activations were stored after ReLU and
    // (in dropout training) after mask scaling, so an entry is positive iff
    // the unit was both active and kept; multiplying by the stored scale
    // routes the gradient through the same mask the forward pass used.
    for (std::size_t k = blk.w.size(); k-- > 0;) {
      const Matrix& a = trace.block_h[j][k];
      Matrix dz = std::move(dh);
      if (!trace.drop_scale.empty() && !trace.drop_scale[j].empty()) {
        const Matrix& s = trace.drop_scale[j][k];
        for (std::size_t t = 0; t < dz.data.size(); ++t) dz.data[t] *= s.data[t];
      }
      for (std::size_t t = 0; t < dz.data.size(); ++t) {
        if (a.data[t] <= 0.0) dz.data[t] = 0.0;
      }
      const Matrix& layer_in = k == 0 ? trace.block_x[j] : trace.block_h[j][k - 1];
      if (grads_out != nullptr) {
        BlockGrad& bg = grads_out->blocks[j];
        Matrix gw = matmul_at_b(layer_in, dz);
        for (std::size_t t = 0; t < gw.data.size(); ++t) bg.w[k].data[t] += gw.data[t];
        const Vector gb = colsum(dz);
        for (std::size_t t = 0; t < gb.size(); ++t) bg.b[k][t] += gb[t];
      }
      dh = matmul_a_bt(dz, blk.w[k]);
    }

    if (embeds) {
      if (!gpass.empty()) {
        for (std::size_t t = 0; t < dh.data.size(); ++t) dh.data[t] += gpass.data[t];
      }
      gx = std::move(dh);
    } else if (input_grad_out != nullptr) {
      for (std::size_t t = 0; t < dh.data.size(); ++t) g_options.data[t] += dh.data[t];
    }
  }

  if (input_grad_out != nullptr) {
    if (embeds) {
      *input_grad_out = gx.empty() ? Matrix(rows, model.n) : std::move(gx);
    } else {
      *input_grad_out = std::move(g_options);
    }
  }
}

// Penalty applied to the first layer of every block. The hierarchical scheme
// touches exactly W_{j,1} and b_{j,1}; the L2 ablation squares the same
// tensors; the plain ablation has no penalty.
enum class PenaltyKind { l1, l2, none };

inline PenaltyKind penalty_kind(Mode mode) {
  switch (mode) {
    case Mode::l2_hinn: return PenaltyKind::l2;
    case Mode::plain_hinn: return PenaltyKind::none;
    default: return PenaltyKind::l1;
  }
}

inline double penalty_value(const HinnModel& model, double lambda) {
  const PenaltyKind kind = penalty_kind(model.hp.mode);
  if (kind == PenaltyKind::none || lambda == 0.0) return 0.0;
  double acc = 0.0;
  for (const Block& blk : model.blocks) {
    for (double w : blk.w[0].data) acc += kind == PenaltyKind::l1 ? std::fabs(w) : w * w;
    for (double b : blk.b[0]) acc += kind == PenaltyKind::l1 ? std::fabs(b) : b * b;
  }
  return lambda * acc;
}

inline void add_penalty_grads(const HinnModel& model, double lambda, GradientSet& grads) {
  const PenaltyKind kind = penalty_kind(model.hp.mode);
  if (kind == PenaltyKind::none || lambda == 0.0) return;
  // Subgradient of |w| at zero is taken as 0.
  const auto d_l1 = [](double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); };
  for (std::size_t j = 0; j < model.blocks.size(); ++j) {
    const Block& blk = model.blocks[j];
    BlockGrad& bg = grads.blocks[j];
    for (std::size_t t = 0; t < blk.w[0].data.size(); ++t) {
      const double w = blk.w[0].data[t];
      bg.w[0].data[t] += lambda * (kind == PenaltyKind::l1 ? d_l1(w) : 2.0 * w);
    }
    for (std::size_t t = 0; t < blk.b[0].size(); ++t) {
      const double b = blk.b[0][t];
      bg.b[0][t] += lambda * (kind == PenaltyKind::l1 ? d_l1(b) : 2.0 * b);
    }
  }
}

inline double mse(const Vector& prediction, const Vector& y) {
  if (prediction.size() != y.size()) {
    throw ShapeError("mse: prediction length " + std::to_string(prediction.size()) +
                     " does not match target length " + std::to_string(y.size()));
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double d = prediction[r] - y[r];
    acc += d * d;
  }
  return acc / static_cast<double>(y.size());
}

}  // namespace detail

// Mean squared error over the batch plus the mode's first-layer penalty.
inline double loss(const HinnModel& model, const Matrix& x, const Vector& y, double lambda) {
  if (x.rows != y.size()) {
    throw ShapeError("loss: input " + shape_str(x) + " does not match target length " +
                     std::to_string(y.size()));
  }
  const Vector pred = predict_batch(model, x);
  return detail::mse(pred, y) + detail::penalty_value(model, lambda);
}

// Exact gradient of loss() w.r.t. every parameter, chaining through the scalar
// heads, the embedding heads, and the block-input concatenations.
inline GradientSet backprop(const HinnModel& model, const Matrix& x, const Vector& y,
                            double lambda) {
  if (x.rows != y.size()) {
    throw ShapeError("backprop: input " + shape_str(x) + " does not match target length " +
                     std::to_string(y.size()));
  }
  FwdOptions opts;
  opts.keep_activations = true;
  const BatchTrace trace = forward_batch(model, x, opts);

  Vector seed(y.size());
  for (std::size_t r = 0; r < y.size(); ++r) {
    seed[r] = 2.0 * (trace.prediction[r] - y[r]) / static_cast<double>(y.size());
  }
  GradientSet grads = zero_grads_like(model);
  detail::backward_pass(model, trace, seed, -1, &grads, nullptr);
  detail::add_penalty_grads(model, lambda, grads);
  return grads;
}

// Gradient of the (normalized) model output w.r.t. the (normalized) options,
// one row per input row. target_block −1 selects the full prediction; block
// targets chain only through the embeddings upstream of that block. Parameters
// stay frozen — this is the attribution workhorse.
inline Matrix input_gradients(const HinnModel& model, const Matrix& x_normalized,
                              int target_block = -1) {
  if (target_block >= 0 && static_cast<std::size_t>(target_block) >= model.blocks.size()) {
    throw ConfigError("input_gradients: block index " + std::to_string(target_block) +
                      " out of range for " + std::to_string(model.blocks.size()) + " blocks");
  }
  FwdOptions opts;
  opts.keep_activations = true;
  const BatchTrace trace = forward_batch(model, x_normalized, opts);
  const Vector seed(x_normalized.rows, 1.0);
  Matrix input_grad;
  detail::backward_pass(model, trace, seed, target_block, nullptr, &input_grad);
  return input_grad;
}

struct AdamState {
  GradientSet m;
  GradientSet v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(const HinnModel& model)
      : m(zero_grads_like(model)), v(zero_grads_like(model)) {}
};

// One Adam update with bias-corrected moments.
inline void adam_step(HinnModel& model, GradientSet& grads, AdamState& state, double lr) {
  state.t += 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  ParamSpans p = collect_params(model);
  ParamSpans g = collect_params(grads);
  ParamSpans ms = collect_params(state.m);
  ParamSpans vs = collect_params(state.v);
  for (std::size_t s = 0; s < p.size(); ++s) {
    double* pp = p[s].first;
    const double* gp = g[s].first;
    double* mp = ms[s].first;
    double* vp = vs[s].first;
    for (std::size_t i = 0; i < p[s].second; ++i) {
      mp[i] = state.beta1 * mp[i] + (1.0 - state.beta1) * gp[i];
      vp[i] = state.beta2 * vp[i] + (1.0 - state.beta2) * gp[i] * gp[i];
      const double mhat = mp[i] / c1;
      const double vhat = vp[i] / c2;
      pp[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

// Inverse-time decay with rate 1e-3 per epoch.
inline double lr_at(double lr0, int epoch) {
  return lr0 / (1.0 + 1e-3 * static_cast<double>(epoch));
}

struct TrainReport {
  Vector loss_trajectory;
  double final_train_mse = 0.0;
  int epochs_run = 0;
};

// Full-batch training: every epoch runs one forward over all rows, one
// backward, one Adam step at the decayed rate. Deterministic given the initial
// model and rng — the rng is consumed only by dropout masks. Divergence
// (non-finite loss or loss above 1e12) aborts with the offending epoch.
inline TrainReport train(HinnModel& model, const Dataset& train_normalized,
                         const Hyperparams& hp, Rng& rng) {
  const Matrix& x = train_normalized.x;
  const Vector& y = train_normalized.y;
  if (x.rows != y.size() || x.rows == 0) {
    throw ShapeError("train: dataset with " + std::to_string(x.rows) + " rows and " +
                     std::to_string(y.size()) + " targets");
  }

  AdamState state(model);
  TrainReport report;
  report.loss_trajectory.reserve(static_cast<std::size_t>(hp.epochs));

  FwdOptions opts;
  opts.training = true;
  opts.rng = &rng;
  opts.keep_activations = true;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    const BatchTrace trace = forward_batch(model, x, opts);
    const double j_reg = detail::mse(trace.prediction, y) + detail::penalty_value(model, hp.lambda);
    if (!std::isfinite(j_reg) || j_reg > 1e12) {
      throw TrainError("training diverged at epoch " + std::to_string(epoch) +
                           " (loss = " + std::to_string(j_reg) + ")",
                       epoch);
    }
    report.loss_trajectory.push_back(j_reg);

    Vector seed(y.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
      seed[r] = 2.0 * (trace.prediction[r] - y[r]) / static_cast<double>(y.size());
    }
    GradientSet grads = zero_grads_like(model);
    detail::backward_pass(model, trace, seed, -1, &grads, nullptr);
    detail::add_penalty_grads(model, hp.lambda, grads);
    adam_step(model, grads, state, lr_at(hp.lr0, epoch));
    report.epochs_run = epoch + 1;
  }

  report.final_train_mse = detail::mse(predict_batch(model, x), y);
  return report;
}

}  // namespace hinn
