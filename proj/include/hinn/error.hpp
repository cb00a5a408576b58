#pragma once

#include <stdexcept>
#include <string>

namespace hinn {

// Base of everything the library throws. The CLI maps these to one-line
// `error:` messages on stderr and exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension mismatch; the message always names both shapes involved.
struct ShapeError : Error {
  using Error::Error;
};

// CSV ingestion problems: missing files, non-numeric cells, bad columns.
struct DataError : Error {
  using Error::Error;
};

// Invalid hyperparameters, out-of-range sample sizes, bad flag values.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed or inconsistent model checkpoint files.
struct CheckpointError : Error {
  using Error::Error;
};

// Divergence during optimization; records the epoch at which it happened.
struct TrainError : Error {
  int epoch;
  TrainError(const std::string& msg, int at_epoch) : Error(msg), epoch(at_epoch) {}
};

}  // namespace hinn
