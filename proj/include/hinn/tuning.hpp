#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/metrics.hpp"
#include "hinn/model.hpp"
#include "hinn/parallel.hpp"
#include "hinn/rng.hpp"
#include "hinn/training.hpp"

namespace hinn {

// The default grid: blocks in {2,3,4,5}, hidden layers in {2,3,4}, 128
// neurons per layer, λ in {0.001, 0.01, 0.1, 1, 10}, both normalization
// schemes, initial learning rate fixed at 0.001. The dropout grid replaces
// the λ axis in dropout mode.
struct SearchSpace {
  std::vector<int> m_values{2, 3, 4, 5};
  std::vector<int> l_values{2, 3, 4};
  int d = 128;
  std::vector<double> lambda_values{0.001, 0.01, 0.1, 1.0, 10.0};
  std::vector<NormMethod> normalizations{NormMethod::maximization, NormMethod::gaussian};
  std::vector<double> dropout_rates{0.1, 0.25, 0.5, 0.75, 0.9};
  double lr0 = 0.001;
  int epochs = 2000;

  void validate() const {
    if (m_values.empty() || l_values.empty() || lambda_values.empty() ||
        normalizations.empty() || dropout_rates.empty()) {
      throw ConfigError("search space: every axis needs at least one value");
    }
    for (int m : m_values)
      if (m < 1) throw ConfigError("search space: m values must be >= 1");
    for (int l : l_values)
      if (l < 1) throw ConfigError("search space: l values must be >= 1");
    if (d < 1) throw ConfigError("search space: d must be >= 1");
    for (double v : lambda_values)
      if (v < 0.0) throw ConfigError("search space: lambda values must be >= 0");
    for (double v : dropout_rates)
      if (!(v > 0.0 && v < 1.0)) throw ConfigError("search space: dropout rates must be in (0,1)");
    if (lr0 <= 0.0) throw ConfigError("search space: lr0 must be > 0");
    if (epochs < 0) throw ConfigError("search space: epochs must be >= 0");
  }
};

// Cartesian product of the mode-relevant axes in a stable order: m, then l,
// then λ (or dropout rate), then normalization. The single-block reduction
// collapses the m axis; the no-penalty ablation collapses the λ axis.
inline std::vector<Hyperparams> enumerate(const SearchSpace& space, Mode mode) {
  space.validate();
  std::vector<int> ms =
      mode == Mode::deepperf_reduction ? std::vector<int>{1} : space.m_values;
  std::vector<double> penalties;
  if (mode == Mode::plain_hinn) {
    penalties = {0.0};
  } else if (mode == Mode::dropout_hinn) {
    penalties = space.dropout_rates;
  } else {
    penalties = space.lambda_values;
  }

  std::vector<Hyperparams> combos;
  for (int m : ms) {
    for (int l : space.l_values) {
      for (double pen : penalties) {
        for (NormMethod norm : space.normalizations) {
          Hyperparams hp;
          hp.m = m;
          hp.l = l;
          hp.d = space.d;
          hp.mode = mode;
          hp.normalization = norm;
          hp.lr0 = space.lr0;
          hp.epochs = space.epochs;
          if (mode == Mode::dropout_hinn) {
            hp.lambda = 0.0;
            hp.dropout_rate = pen;
          } else {
            hp.lambda = pen;
            hp.dropout_rate = 0.0;
          }
          hp.validate();
          combos.push_back(hp);
        }
      }
    }
  }
  return combos;
}

struct Trial {
  Hyperparams hp;
  double val_mre = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string error;
  TrainReport report;
};

struct GridSearchResult {
  std::vector<Trial> trials;
  HinnModel best;
  Hyperparams best_hp;
  std::size_t best_index = 0;
};

// Smallest validation MRE wins. Ties prefer the simplest, most-regularized
// model: smaller m, then smaller l, then larger λ, then maximization before
// gaussian; an exact tie beyond that keeps the earlier combo.
inline std::size_t select_best(const std::vector<Trial>& trials) {
  auto better = [](const Trial& a, const Trial& b) {
    if (a.val_mre != b.val_mre) return a.val_mre < b.val_mre;
    if (a.hp.m != b.hp.m) return a.hp.m < b.hp.m;
    if (a.hp.l != b.hp.l) return a.hp.l < b.hp.l;
    if (a.hp.lambda != b.hp.lambda) return a.hp.lambda > b.hp.lambda;
    if (a.hp.normalization != b.hp.normalization) {
      return a.hp.normalization == NormMethod::maximization;
    }
    return false;
  };
  std::size_t best = trials.size();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].failed) continue;
    if (best == trials.size() || better(trials[i], trials[best])) best = i;
  }
  if (best == trials.size()) {
    std::string first_error = "no trials";
    for (const Trial& t : trials) {
      if (t.failed) {
        first_error = t.error;
        break;
      }
    }
    throw Error("grid search: all " + std::to_string(trials.size()) +
                " trials failed; first error: " + first_error);
  }
  return best;
}

namespace detail {

inline HinnModel fit_one(const SplitSample& sample, const Hyperparams& hp, std::uint64_t seed,
                         TrainReport& report) {
  Rng rng(seed);
  const NormalizationSpec spec = fit_normalizer(sample.train, hp.normalization);
  const Dataset train_n = apply_normalizer(spec, sample.train);
  HinnModel model = new_model(sample.train.n_options(), hp, rng);
  model.normalizer = spec;
  model.option_names.clear();
  for (const OptionSpec& o : sample.train.options) model.option_names.push_back(o.name);
  report = train(model, train_n, hp, rng);
  return model;
}

}  // namespace detail

// Trains one model per grid combo (seed-split per combo index), scores each on
// denormalized validation predictions, and returns every trial plus the argmin
// model. Diverged trials are recorded as failed and excluded from selection;
// the search only fails if every combo does. Workers never share state, so
// results are identical for any jobs count.
inline GridSearchResult grid_search(const SplitSample& sample, const SearchSpace& space,
                                    Mode mode, std::uint64_t seed, int jobs = 1) {
  if (sample.train.rows() == 0 || sample.valid.rows() == 0) {
    throw ConfigError("grid search: train and validation sets must be nonempty");
  }
  const std::vector<Hyperparams> combos = enumerate(space, mode);

  GridSearchResult result;
  result.trials.resize(combos.size());
  parallel_for(combos.size(), jobs, [&](std::size_t i) {
    Trial& trial = result.trials[i];
    trial.hp = combos[i];
    try {
      const HinnModel model = detail::fit_one(sample, combos[i], hash2(seed, i), trial.report);
      const Matrix valid_xn = model.normalizer.apply_x(sample.valid.x);
      const Vector pred = model.normalizer.invert_y(predict_batch(model, valid_xn));
      trial.val_mre = mre(sample.valid.y, pred);
    } catch (const Error& e) {
      trial.failed = true;
      trial.error = e.what();
    }
  });

  result.best_index = select_best(result.trials);
  result.best_hp = result.trials[result.best_index].hp;
  // Retrain the winner from its own trial seed instead of holding 100+ trained
  // models in memory; the pipeline is deterministic, so this reproduces the
  // trial's parameters bit for bit.
  TrainReport report;
  result.best = detail::fit_one(sample, result.best_hp, hash2(seed, result.best_index), report);
  return result;
}

}  // namespace hinn
