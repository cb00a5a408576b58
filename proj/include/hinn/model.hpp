#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/matrix.hpp"
#include "hinn/rng.hpp"

namespace hinn {

enum class Mode {
  hinn,                // full model: hierarchical blocks + interaction embeddings + L1
  mb_fnn,              // ablation: no embeddings, every block reads the options directly
  l2_hinn,             // ablation: squared-norm penalty on the same tensors
  plain_hinn,          // ablation: no penalty at all
  dropout_hinn,        // ablation: dropout on hidden layers instead of a penalty
  deepperf_reduction,  // single block, no embedding — a plain regularized FNN
};

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::hinn: return "hinn";
    case Mode::mb_fnn: return "mb_fnn";
    case Mode::l2_hinn: return "l2_hinn";
    case Mode::plain_hinn: return "plain_hinn";
    case Mode::dropout_hinn: return "dropout_hinn";
    case Mode::deepperf_reduction: return "deepperf_reduction";
  }
  return "hinn";
}

// Accepts both the canonical names and the short CLI spellings.
inline Mode mode_from_string(const std::string& s) {
  if (s == "hinn") return Mode::hinn;
  if (s == "mb_fnn" || s == "mb-fnn") return Mode::mb_fnn;
  if (s == "l2_hinn" || s == "l2") return Mode::l2_hinn;
  if (s == "plain_hinn" || s == "plain") return Mode::plain_hinn;
  if (s == "dropout_hinn" || s == "dropout") return Mode::dropout_hinn;
  if (s == "deepperf_reduction" || s == "deepperf") return Mode::deepperf_reduction;
  throw ConfigError("unknown mode '" + s +
                    "' (expected hinn, mb-fnn, l2, plain, dropout or deepperf)");
}

// Whether blocks grow their inputs with interaction embeddings.
inline bool uses_embedding(Mode m) {
  return m == Mode::hinn || m == Mode::l2_hinn || m == Mode::plain_hinn ||
         m == Mode::dropout_hinn;
}

struct Hyperparams {
  int m = 2;          // number of blocks (interaction order)
  int l = 2;          // hidden layers per block
  int d = 128;        // neurons per hidden layer
  double lambda = 0.01;
  double lr0 = 0.001;
  int epochs = 2000;
  NormMethod normalization = NormMethod::maximization;
  Mode mode = Mode::hinn;
  double dropout_rate = 0.0;

  void validate() const {
    if (m < 1) throw ConfigError("hyperparams: m must be >= 1, got " + std::to_string(m));
    if (l < 1) throw ConfigError("hyperparams: l must be >= 1, got " + std::to_string(l));
    if (d < 1) throw ConfigError("hyperparams: d must be >= 1, got " + std::to_string(d));
    if (lambda < 0.0) throw ConfigError("hyperparams: lambda must be >= 0");
    if (lr0 <= 0.0) throw ConfigError("hyperparams: lr0 must be > 0");
    if (epochs < 0) throw ConfigError("hyperparams: epochs must be >= 0");
    if (mode == Mode::deepperf_reduction && m != 1) {
      throw ConfigError("hyperparams: deepperf reduction requires m = 1, got m = " +
                        std::to_string(m));
    }
    if (mode == Mode::dropout_hinn) {
      if (!(dropout_rate > 0.0 && dropout_rate < 1.0)) {
        throw ConfigError("hyperparams: dropout mode requires dropout_rate in (0, 1)");
      }
    }
  }
};

// Input width of block j (1-based). Blocks in embedding modes see the options
// plus every earlier embedding (j·n); ablations without embeddings always see
// the raw options.
inline std::size_t block_input_width(Mode mode, std::size_t n, std::size_t j) {
  return uses_embedding(mode) ? j * n : n;
}

// One block: l ReLU hidden layers, a linear scalar head producing the partial
// performance value, and (in embedding modes) a ReLU embedding head of width n
// feeding the next block.
struct Block {
  std::vector<Matrix> w;  // w[0]: input×d, rest d×d
  std::vector<Vector> b;
  Vector head_w;  // d
  double head_b = 0.0;
  Matrix embed_w;  // d×n, empty when the mode has no embeddings
  Vector embed_b;  // n

  bool has_embed() const { return !embed_w.empty(); }
};

struct HinnModel {
  std::size_t n = 0;  // option count
  Hyperparams hp;
  std::vector<Block> blocks;
  NormalizationSpec normalizer;  // identity until a trainer fits one
  std::vector<std::string> option_names;
};

inline NormalizationSpec identity_normalizer(std::size_t n, NormMethod method) {
  NormalizationSpec spec;
  spec.method = method;
  spec.x_offset.assign(n, 0.0);
  spec.x_scale.assign(n, 1.0);
  spec.y_offset = 0.0;
  spec.y_scale = 1.0;
  return spec;
}

// Fresh model with Glorot-uniform weights and zero biases; parameter draws
// run block by block (hidden layers, scalar head, embedding head), so equal
// seeds give bit-identical models. The last block's embedding head is
// allocated like every other — it is never consumed, but keeping the blocks
// uniform keeps the parameter-count formula exact.
inline HinnModel new_model(std::size_t n, const Hyperparams& hp, Rng& rng) {
  if (n < 1) throw ConfigError("new_model: option count must be >= 1");
  hp.validate();

  HinnModel model;
  model.n = n;
  model.hp = hp;
  model.normalizer = identity_normalizer(n, hp.normalization);
  const auto d = static_cast<std::size_t>(hp.d);

  for (int j = 1; j <= hp.m; ++j) {
    Block blk;
    const std::size_t in = block_input_width(hp.mode, n, static_cast<std::size_t>(j));
    blk.w.push_back(glorot_init(in, d, rng));
    blk.b.emplace_back(d, 0.0);
    for (int k = 1; k < hp.l; ++k) {
      blk.w.push_back(glorot_init(d, d, rng));
      blk.b.emplace_back(d, 0.0);
    }
    const Matrix head = glorot_init(d, 1, rng);
    blk.head_w = head.data;
    blk.head_b = 0.0;
    if (uses_embedding(hp.mode)) {
      blk.embed_w = glorot_init(d, n, rng);
      blk.embed_b.assign(n, 0.0);
    }
    model.blocks.push_back(std::move(blk));
  }
  return model;
}

// Per spec of the original architecture: block j with embedding carries
// (jn+1)d weights+biases into the first layer, (l−1)(d+1)d for the remaining
// hidden layers, and (d+1)(n+1) for the two heads.
inline std::size_t param_count(std::size_t n, std::size_t d, std::size_t l, std::size_t j) {
  return (j * n + 1) * d + (l - 1) * (d + 1) * d + (d + 1) * (n + 1);
}

inline std::size_t model_param_count(const HinnModel& model) {
  std::size_t total = 0;
  for (const Block& blk : model.blocks) {
    for (const Matrix& w : blk.w) total += w.data.size();
    for (const Vector& b : blk.b) total += b.size();
    total += blk.head_w.size() + 1;
    total += blk.embed_w.data.size() + blk.embed_b.size();
  }
  return total;
}

struct FwdOptions {
  bool training = false;        // enables dropout masking in dropout mode
  Rng* rng = nullptr;           // required when training a dropout model
  bool keep_activations = false;  // retain per-block tensors for backprop/attribution
};

// Everything a batched forward pass produces. Activation tensors are filled
// only when keep_activations was requested; predictions and partials always.
struct BatchTrace {
  Vector prediction;               // rows
  Matrix partials;                 // rows × m
  std::vector<Matrix> block_x;     // input of each block
  std::vector<std::vector<Matrix>> block_h;      // post-activation hidden layers
  std::vector<std::vector<Matrix>> drop_scale;   // inverted-dropout factors, {} unless used
  std::vector<Matrix> block_e;     // consumed embedding outputs (blocks 1..m−1)
};

// Forward pass over a whole batch (inputs in normalized units). x₁ is the
// option matrix; each further block sees its predecessor's input concatenated
// with that block's embedding output. The prediction is the ascending sum of
// the scalar heads, and dropout (training only) masks hidden activations with
// inverted scaling so inference needs no correction.
inline BatchTrace forward_batch(const HinnModel& model, const Matrix& x,
                                const FwdOptions& opts = {}) {
  if (x.cols != model.n) {
    throw ShapeError("forward: input " + shape_str(x) + " does not match option count " +
                     std::to_string(model.n));
  }
  const bool dropout_active =
      opts.training && model.hp.mode == Mode::dropout_hinn && model.hp.dropout_rate > 0.0;
  if (dropout_active && opts.rng == nullptr) {
    throw ConfigError("forward: dropout training requires an rng");
  }

  const std::size_t m = model.blocks.size();
  const std::size_t rows = x.rows;
  BatchTrace trace;
  trace.prediction.assign(rows, 0.0);
  trace.partials = Matrix(rows, m);
  if (opts.keep_activations) {
    trace.block_x.resize(m);
    trace.block_h.resize(m);
    trace.block_e.resize(m);
    if (dropout_active) trace.drop_scale.resize(m);
  }

  Matrix cur = x;
  for (std::size_t j = 0; j < m; ++j) {
    const Block& blk = model.blocks[j];
    if (opts.keep_activations) trace.block_x[j] = cur;

    Matrix h = cur;
    for (std::size_t k = 0; k < blk.w.size(); ++k) {
      Matrix z = matmul(h, blk.w[k]);
      add_row_inplace(z, blk.b[k]);
      relu_inplace(z);
      if (dropout_active) {
        Matrix scale(z.rows, z.cols);
        const double p = model.hp.dropout_rate;
        const double keep = 1.0 / (1.0 - p);
        for (std::size_t t = 0; t < z.data.size(); ++t) {
          scale.data[t] = opts.rng->next_double() < p ? 0.0 : keep;
          z.data[t] *= scale.data[t];
        }
        if (opts.keep_activations) trace.drop_scale[j].push_back(std::move(scale));
      }
      h = std::move(z);
      if (opts.keep_activations) trace.block_h[j].push_back(h);
    }

    for (std::size_t r = 0; r < rows; ++r) {
      const double* hrow = &h.data[r * h.cols];
      double acc = 0.0;
      for (std::size_t t = 0; t < h.cols; ++t) acc += hrow[t] * blk.head_w[t];
      const double f = acc + blk.head_b;
      trace.partials(r, j) = f;
      trace.prediction[r] += f;
    }

    const bool feed_next = blk.has_embed() && j + 1 < m;
    if (feed_next) {
      Matrix e = matmul(h, blk.embed_w);
      add_row_inplace(e, blk.embed_b);
      relu_inplace(e);
      if (opts.keep_activations) trace.block_e[j] = e;
      cur = hconcat(cur, e);
    } else if (j + 1 < m && !uses_embedding(model.hp.mode)) {
      cur = x;  // ablation without embeddings: every block reads the options
    }
  }
  return trace;
}

// Single-configuration view of a forward pass.
struct ForwardTrace {
  double prediction = 0.0;
  Vector partials;
  std::vector<Vector> block_inputs;
  std::vector<std::vector<Vector>> block_hidden;
};

inline ForwardTrace forward(const HinnModel& model, const Vector& o, bool training = false,
                            Rng* rng = nullptr) {
  if (o.size() != model.n) {
    throw ShapeError("forward: input of length " + std::to_string(o.size()) +
                     " does not match option count " + std::to_string(model.n));
  }
  Matrix x(1, o.size());
  x.data = o;
  FwdOptions opts;
  opts.training = training;
  opts.rng = rng;
  opts.keep_activations = true;
  const BatchTrace batch = forward_batch(model, x, opts);

  ForwardTrace out;
  out.prediction = batch.prediction[0];
  out.partials.resize(model.blocks.size());
  for (std::size_t j = 0; j < model.blocks.size(); ++j) out.partials[j] = batch.partials(0, j);
  for (const Matrix& bx : batch.block_x) out.block_inputs.push_back(bx.data);
  out.block_hidden.resize(batch.block_h.size());
  for (std::size_t j = 0; j < batch.block_h.size(); ++j) {
    for (const Matrix& h : batch.block_h[j]) out.block_hidden[j].push_back(h.data);
  }
  return out;
}

inline Vector predict_batch(const HinnModel& model, const Matrix& x_normalized) {
  return forward_batch(model, x_normalized, {}).prediction;
}

}  // namespace hinn
