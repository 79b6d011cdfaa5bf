#pragma once

// Labeled feature tables: CSV ingestion, z-score standardization, stratified
// splitting and the toy problems used by the demos.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qlear/classifier.hpp"

namespace qlear {

struct LabeledDataset {
  std::vector<FeatureVector> features;
  /// Index into class_names per row. Empty for unlabeled data.
  std::vector<std::size_t> labels;
  /// Unique labels in first-appearance order.
  std::vector<Label> class_names;

  std::size_t size() const noexcept { return features.size(); }
  std::size_t dim() const noexcept { return features.empty() ? 0 : features.front().size(); }
  bool labeled() const noexcept { return !labels.empty() || features.empty(); }

  /// Throws EmptyInput, DimensionMismatch, NonFiniteInput, InvalidParams.
  void validate() const;

  std::vector<std::size_t> class_counts() const;
  /// Row indices of class c, ascending.
  std::vector<std::size_t> rows_of_class(std::size_t c) const;
  /// Rows in the given order; class_names are kept as-is.
  LabeledDataset subset(std::span<const std::size_t> rows) const;
  /// Keeps the given 0-based feature columns, in order.
  LabeledDataset select_features(std::span<const std::size_t> columns) const;
};

struct LabelColumn {
  enum class Kind { Last, Index, None };
  Kind kind = Kind::Last;
  std::size_t index = 0;

  static LabelColumn last() { return {}; }
  static LabelColumn at(std::size_t i) { return {Kind::Index, i}; }
  static LabelColumn none() { return {Kind::None, 0}; }
};

struct CsvOptions {
  bool has_header = false;
  LabelColumn label_column = LabelColumn::last();
  char delimiter = ',';
};

/// Throws FileNotFound, ParseError, InconsistentColumns, EmptyFile.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
LabeledDataset parse_csv(std::istream& in, const CsvOptions& options = {}, std::string_view source = "<stream>");

/// Cell count of the first non-empty line. Throws FileNotFound, EmptyFile.
std::size_t count_csv_columns(const std::filesystem::path& path, char delimiter = ',');

/// Features followed by the label (if any), no header, shortest round-trip
/// decimal representation.
void write_csv(std::ostream& out, const LabeledDataset& dataset, char delimiter = ',');

/// Per-feature z-score parameters. Constant features get std = 1.
struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<bool> constant;

  bool any_constant() const noexcept;
  FeatureVector apply(std::span<const double> x) const;
  FeatureVector invert(std::span<const double> z) const;
  LabeledDataset apply(const LabeledDataset& dataset) const;
  std::vector<FeatureVector> apply(std::span<const FeatureVector> rows) const;
};

/// Population mean and standard deviation per column. Throws SingleSample.
StandardizationStats fit_standardization(std::span<const FeatureVector> rows);

std::pair<LabeledDataset, StandardizationStats> standardize(const LabeledDataset& dataset);

struct TrainTestSplit {
  LabeledDataset train;
  LabeledDataset test;
};

/// Stratified seeded split. Each class sends floor(test_fraction * n_c)
/// rows to the test side, clamped to [1, n_c - 1]. Throws InvalidFraction,
/// ClassTooSmall.
TrainTestSplit split(const LabeledDataset& dataset, double test_fraction, std::uint64_t seed);

/// Corners (1,1),(-1,-1) -> "A" and (1,-1),(-1,1) -> "B", each repeated
/// n_per_arm times with Gaussian jitter. Throws InvalidParams.
LabeledDataset make_xor(std::size_t n_per_arm, double noise_std, std::uint64_t seed);

/// Corner (1,1) -> "TRUE", the other three -> "FALSE".
LabeledDataset make_and(std::size_t n_per_arm, double noise_std, std::uint64_t seed);

/// Isotropic Gaussian blobs labelled "c0", "c1", ... around each centre.
LabeledDataset make_blobs(std::span<const FeatureVector> centers, std::size_t n_per_class, double noise_std,
                          std::uint64_t seed);

}  // namespace qlear
