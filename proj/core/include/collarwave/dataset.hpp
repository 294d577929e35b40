#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace collarwave {

struct FeatureSchema {
  std::vector<std::string> names;

  // FNV-1a over the newline-joined names; identifies the column layout in
  // datasets and model artifacts.
  std::uint64_t hash() const;
};

// A single feature row tagged with the schema it was extracted under.
struct FeatureVector {
  std::vector<double> values;
  std::uint64_t schema_hash = 0;
};

struct Dataset {
  FeatureSchema schema;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // row-major, n_rows * n_cols
  std::vector<std::string> labels;
  std::vector<std::string> groups;        // dog / recording id per row
  std::vector<std::int64_t> window_starts;  // window_start_index per row

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values.data() + i * n_cols, n_cols);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(values.data() + i * n_cols, n_cols);
  }

  // Distinct labels in sorted order.
  std::vector<std::string> classes() const;
  // Row indices selected by predicate on row index, preserving order.
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

// Per-column population statistics (divisor n).
struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::uint8_t> constant;  // stddev < 1e-12

  static constexpr double kConstantEps = 1e-12;

  // Identity stats (mean 0, stddev 1) for d columns.
  static NormalizationStats identity(std::size_t d);
};

NormalizationStats fit_normalizer(const Dataset& ds);

// Maps each column v -> (v - mean) / stddev; constant columns map to 0.
Dataset apply_normalizer(const Dataset& ds, const NormalizationStats& stats);
void normalize_in_place(std::span<double> row, const NormalizationStats& stats);

// Feature dataset CSV: header `recording_id,window_start_index,label,<names>`.
// Values are printed with shortest exact representation; read(write(ds))
// reproduces every value bit-for-bit.
std::string write_dataset_csv(const Dataset& ds);
Dataset read_dataset_csv(std::string_view text);

}  // namespace collarwave
