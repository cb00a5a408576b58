#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hinn/dataset.hpp"
#include "hinn/error.hpp"
#include "hinn/metrics.hpp"
#include "hinn/parallel.hpp"
#include "hinn/rng.hpp"
#include "hinn/stats.hpp"
#include "hinn/tuning.hpp"

namespace hinn {

struct EvalSummary {
  std::vector<double> per_run_mre;  // percent, one per repetition
  double mean = 0.0;
  double ci_margin = 0.0;  // half-width of the 95% confidence interval
  std::size_t sample_size = 0;
  std::size_t repetitions = 0;
};

// Mean and 95% CI half-width over per-repetition MREs. Student-t with reps−1
// degrees of freedom and the sample (n−1) standard deviation.
inline EvalSummary summarize(const std::vector<double>& per_run_mre, std::size_t sample_size) {
  if (per_run_mre.size() < 2) {
    throw ConfigError("summarize: need at least 2 repetitions, got " +
                      std::to_string(per_run_mre.size()));
  }
  EvalSummary s;
  s.per_run_mre = per_run_mre;
  s.sample_size = sample_size;
  s.repetitions = per_run_mre.size();
  s.mean = mean(per_run_mre);
  const double t = t_quantile(0.975, static_cast<double>(s.repetitions - 1));
  s.ci_margin = t * sample_std(per_run_mre) / std::sqrt(static_cast<double>(s.repetitions));
  return s;
}

// The repeated-experiment protocol: for each repetition, draw a fresh sample
// split, grid-search on its train/validation part, and score the selected
// model's denormalized predictions on the untouched test rows. One master
// seed drives everything; repetition seeds are split from it, so a whole
// summary is one reproducible command.
inline EvalSummary run_experiments(const Dataset& ds, const SearchSpace& space, Mode mode,
                                   std::size_t sample_size, std::size_t repetitions,
                                   std::uint64_t seed, int jobs = 1) {
  if (repetitions < 2) {
    throw ConfigError("run_experiments: repetitions must be >= 2, got " +
                      std::to_string(repetitions));
  }
  std::vector<double> per_run(repetitions, 0.0);
  parallel_for(repetitions, jobs, [&](std::size_t r) {
    const std::uint64_t rep_seed = hash2(seed, r);
    const SplitSample sample = split(ds, sample_size, hash2(rep_seed, 1));
    const GridSearchResult gsr = grid_search(sample, space, mode, hash2(rep_seed, 2), 1);
    const Matrix test_xn = gsr.best.normalizer.apply_x(sample.test.x);
    const Vector pred = gsr.best.normalizer.invert_y(predict_batch(gsr.best, test_xn));
    per_run[r] = mre(sample.test.y, pred);
  });
  return summarize(per_run, sample_size);
}

struct RankSumResult {
  double statistic = 0.0;  // rank-sum of the first sample (midranks)
  double z = 0.0;          // tie-corrected normal approximation
  double p_value = 1.0;    // two-sided
  bool significant = false;  // at the 0.05 level
  std::string method;        // "exact" or "normal"
};

namespace detail {

// Midranks of the combined sample: ties share the average of the positions
// they occupy (1-based).
inline std::vector<double> midranks(const std::vector<double>& combined) {
  const std::size_t n = combined.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return combined[a] < combined[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && combined[order[j + 1]] == combined[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i);
    c /= static_cast<double>(i);
    if (c > 1e18) return c;  // large enough to exceed any enumeration bound
  }
  return c;
}

// Exhaustive two-sided p: the fraction of all C(N, na) rank assignments whose
// rank-sum deviates from the mean at least as much as the observed one.
inline double exact_rank_sum_p(const std::vector<double>& ranks, std::size_t na, double observed,
                               double mu) {
  const std::size_t n = ranks.size();
  const double threshold = std::fabs(observed - mu) - 1e-9;
  std::vector<std::size_t> c(na);
  std::iota(c.begin(), c.end(), 0);
  std::uint64_t total = 0;
  std::uint64_t extreme = 0;
  while (true) {
    double w = 0.0;
    for (std::size_t idx : c) w += ranks[idx];
    ++total;
    if (std::fabs(w - mu) >= threshold) ++extreme;
    // next combination in lexicographic order
    std::size_t i = na;
    bool exhausted = true;
    while (i-- > 0) {
      if (c[i] != i + n - na) {
        exhausted = false;
        break;
      }
    }
    if (exhausted) return static_cast<double>(extreme) / static_cast<double>(total);
    ++c[i];
    for (std::size_t k = i + 1; k < na; ++k) c[k] = c[k - 1] + 1;
  }
}

}  // namespace detail

// Two-sample rank-sum test on midranks. Small samples are decided by
// exhaustive enumeration of every rank assignment (the approximation is
// visibly off there); larger ones use the tie-corrected normal approximation,
// which is standard practice at the 30-repetition scale this pipeline runs.
// The z statistic is reported in both regimes.
inline RankSumResult rank_sum_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw ConfigError("rank_sum_test: both samples need at least 2 values");
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;

  std::vector<double> combined;
  combined.reserve(n);
  combined.insert(combined.end(), a.begin(), a.end());
  combined.insert(combined.end(), b.begin(), b.end());
  const std::vector<double> ranks = detail::midranks(combined);

  RankSumResult res;
  for (std::size_t i = 0; i < na; ++i) res.statistic += ranks[i];

  const double mu = static_cast<double>(na) * static_cast<double>(n + 1) / 2.0;

  // Tie-corrected variance of the rank-sum under the null.
  double tie_term = 0.0;
  {
    std::vector<double> sorted = combined;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double nn = static_cast<double>(n);
  const double variance = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                          ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));

  res.z = variance > 0.0 ? (res.statistic - mu) / std::sqrt(variance) : 0.0;

  const bool small = std::min(na, nb) < 8 && detail::choose(n, na) <= 2e6;
  if (small) {
    res.method = "exact";
    res.p_value = detail::exact_rank_sum_p(ranks, na, res.statistic, mu);
  } else {
    res.method = "normal";
    res.p_value = variance > 0.0 ? std::min(1.0, 2.0 * (1.0 - normal_cdf(std::fabs(res.z)))) : 1.0;
  }
  res.significant = res.p_value < 0.05;
  return res;
}

}  // namespace hinn
