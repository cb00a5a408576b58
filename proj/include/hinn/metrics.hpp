#pragma once

#include <string>
#include <vector>

#include "hinn/error.hpp"

namespace hinn {

// Mean relative error in percent: (1/|T|) Σ |actual − predicted| / actual × 100.
// Shared by validation (model selection) and test-time reporting so the two
// always agree on the metric.
inline double mre(const std::vector<double>& actual, const std::vector<double>& predicted) {
  if (actual.size() != predicted.size() || actual.empty()) {
    throw ShapeError("mre: lengths " + std::to_string(actual.size()) + " and " +
                     std::to_string(predicted.size()) + " (need equal, nonzero)");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      throw Error("mre: actual value at index " + std::to_string(i) +
                  " is zero; relative error is undefined");
    }
    const double diff = actual[i] - predicted[i];
    acc += (diff < 0.0 ? -diff : diff) / actual[i];
  }
  return acc / static_cast<double>(actual.size()) * 100.0;
}

}  // namespace hinn
