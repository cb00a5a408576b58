#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hinn/error.hpp"
#include "hinn/matrix.hpp"
#include "hinn/rng.hpp"
#include "hinn/stats.hpp"

namespace hinn {

enum class OptionKind { binary, numeric };

struct OptionSpec {
  std::string name;
  OptionKind kind = OptionKind::numeric;
};

// One measured system: configuration matrix x (rows × n options) plus the
// performance vector y in original units. Immutable after load; grid-search
// workers share it freely.
struct Dataset {
  std::vector<OptionSpec> options;
  Matrix x;
  Vector y;
  std::string perf_name;

  std::size_t rows() const { return x.rows; }
  std::size_t n_options() const { return options.size(); }
};

struct SplitSample {
  Dataset train;
  Dataset valid;
  Dataset test;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
};

enum class NormMethod { maximization, gaussian };

inline std::string to_string(NormMethod m) {
  return m == NormMethod::maximization ? "maximization" : "gaussian";
}

inline NormMethod norm_method_from_string(const std::string& s) {
  if (s == "maximization") return NormMethod::maximization;
  if (s == "gaussian") return NormMethod::gaussian;
  throw ConfigError("unknown normalization '" + s + "' (expected maximization or gaussian)");
}

// Per-column affine transform: normalized = (v − offset) / scale.
// Maximization stores offset 0 and scale max|v|; Gaussian stores mean and
// population std. Degenerate columns (scale 0) get scale 1 — a constant
// column carries no signal either way. Fitted on training rows only.
struct NormalizationSpec {
  NormMethod method = NormMethod::maximization;
  Vector x_offset;
  Vector x_scale;
  double y_offset = 0.0;
  double y_scale = 1.0;

  std::size_t n_columns() const { return x_scale.size(); }

  Matrix apply_x(const Matrix& x) const {
    if (x.cols != x_scale.size()) {
      throw ShapeError("normalize: matrix " + shape_str(x) + " does not match spec with " +
                       std::to_string(x_scale.size()) + " columns");
    }
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t j = 0; j < x.cols; ++j)
        out(i, j) = (x(i, j) - x_offset[j]) / x_scale[j];
    return out;
  }

  Vector apply_y(const Vector& y) const {
    Vector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (y[i] - y_offset) / y_scale;
    return out;
  }

  double invert_y(double y_norm) const { return y_scale * y_norm + y_offset; }

  Vector invert_y(const Vector& y_norm) const {
    Vector out(y_norm.size());
    for (std::size_t i = 0; i < y_norm.size(); ++i) out[i] = invert_y(y_norm[i]);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                    ", column '" + col + "'");
  }
  return value;
}

}  // namespace detail

// Reads a comma-separated file with one header row; every non-performance
// column becomes an option, kind inferred as binary iff all values are 0/1.
// Zero performance values are rejected here, up front: the relative-error
// metric divides by the measured value and is undefined at zero.
inline Dataset load_csv(const std::string& path, const std::string& performance_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset file '" + path + "' is empty");
  const std::vector<std::string> header = detail::split_line(line);

  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) {
      throw DataError("empty column name in header of '" + path + "'");
    }
    for (std::size_t j = i + 1; j < header.size(); ++j) {
      if (header[i] == header[j]) {
        throw DataError("duplicate column name '" + header[i] + "' in '" + path + "'");
      }
    }
  }

  std::size_t perf_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == performance_column) perf_idx = i;
  }
  if (perf_idx == header.size()) {
    throw DataError("performance column '" + performance_column + "' not found in '" + path + "'");
  }

  std::vector<Vector> columns(header.size());
  std::size_t row = 1;  // 1-based over data rows, matching user expectations
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      columns[i].push_back(detail::parse_cell(cells[i], row, header[i]));
    }
    ++row;
  }

  const std::size_t n_rows = columns[perf_idx].size();
  if (n_rows == 0) throw DataError("no data rows in '" + path + "'");
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (columns[perf_idx][r] == 0.0) {
      throw DataError("zero performance value at row " + std::to_string(r + 1) +
                      ": mean relative error is undefined for zero measurements");
    }
  }

  Dataset ds;
  ds.perf_name = performance_column;
  ds.y = columns[perf_idx];
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == perf_idx) continue;
    OptionSpec spec;
    spec.name = header[i];
    bool binary = true;
    for (double v : columns[i]) {
      if (v != 0.0 && v != 1.0) {
        binary = false;
        break;
      }
    }
    spec.kind = binary ? OptionKind::binary : OptionKind::numeric;
    ds.options.push_back(spec);
  }

  const std::size_t n = ds.options.size();
  ds.x = Matrix(n_rows, n);
  std::size_t out_col = 0;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == perf_idx) continue;
    for (std::size_t r = 0; r < n_rows; ++r) ds.x(r, out_col) = columns[i][r];
    ++out_col;
  }
  return ds;
}

inline Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.options = ds.options;
  out.perf_name = ds.perf_name;
  out.x = Matrix(indices.size(), ds.x.cols);
  out.y.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    for (std::size_t j = 0; j < ds.x.cols; ++j) out.x(i, j) = ds.x(indices[i], j);
    out.y[i] = ds.y[indices[i]];
  }
  return out;
}

// Seeded shuffle of all row indices; the first sample_size rows form the
// sample, split 67/33 (round half up) into train/validation, and the
// untouched remainder is the test set.
inline SplitSample split(const Dataset& ds, std::size_t sample_size, std::uint64_t seed) {
  if (sample_size < 2 || sample_size >= ds.rows()) {
    throw ConfigError("sample_size must satisfy 2 <= sample_size < " +
                      std::to_string(ds.rows()) + ", got " + std::to_string(sample_size));
  }
  std::vector<std::size_t> idx(ds.rows());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  const auto n_train =
      static_cast<std::size_t>(std::floor(0.67 * static_cast<double>(sample_size) + 0.5));

  SplitSample out;
  out.sample_size = sample_size;
  out.seed = seed;
  out.train = subset(ds, {idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train)});
  out.valid = subset(ds, {idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                          idx.begin() + static_cast<std::ptrdiff_t>(sample_size)});
  out.test = subset(ds, {idx.begin() + static_cast<std::ptrdiff_t>(sample_size), idx.end()});
  return out;
}

inline NormalizationSpec fit_normalizer(const Dataset& train, NormMethod method) {
  if (train.rows() == 0) throw ConfigError("fit_normalizer: training set is empty");
  NormalizationSpec spec;
  spec.method = method;
  const std::size_t n = train.n_options();
  spec.x_offset.assign(n, 0.0);
  spec.x_scale.assign(n, 1.0);

  if (method == NormMethod::maximization) {
    for (std::size_t j = 0; j < n; ++j) {
      double mx = 0.0;
      for (std::size_t i = 0; i < train.rows(); ++i) mx = std::max(mx, std::fabs(train.x(i, j)));
      spec.x_scale[j] = mx == 0.0 ? 1.0 : mx;
    }
    double my = 0.0;
    for (double v : train.y) my = std::max(my, std::fabs(v));
    spec.y_offset = 0.0;
    spec.y_scale = my == 0.0 ? 1.0 : my;
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      Vector col(train.rows());
      for (std::size_t i = 0; i < train.rows(); ++i) col[i] = train.x(i, j);
      const double sd = population_std(col);
      spec.x_offset[j] = mean(col);
      spec.x_scale[j] = sd == 0.0 ? 1.0 : sd;
    }
    const double sd = population_std(train.y);
    spec.y_offset = mean(train.y);
    spec.y_scale = sd == 0.0 ? 1.0 : sd;
  }
  return spec;
}

// Columnwise transform of a whole dataset. Test data normalized with a
// train-fitted spec may land outside [0, 1] under maximization — accepted,
// never clipped: inference must use exactly the training-time parameters.
inline Dataset apply_normalizer(const NormalizationSpec& spec, const Dataset& ds) {
  if (ds.n_options() != spec.n_columns()) {
    throw ShapeError("apply_normalizer: dataset has " + std::to_string(ds.n_options()) +
                     " option columns, spec expects " + std::to_string(spec.n_columns()));
  }
  Dataset out;
  out.options = ds.options;
  out.perf_name = ds.perf_name;
  out.x = spec.apply_x(ds.x);
  out.y = spec.apply_y(ds.y);
  return out;
}

}  // namespace hinn
