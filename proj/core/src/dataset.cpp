#include "qlear/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "qlear/error.hpp"

namespace qlear {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<std::size_t> shuffled(std::vector<std::size_t> rows, std::mt19937_64& rng) {
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

LabeledDataset make_corners(std::span<const FeatureVector> corners, std::span<const std::size_t> corner_class,
                            std::vector<Label> names, std::size_t n_per_arm, double noise_std, std::uint64_t seed) {
  if (n_per_arm < 1 || !(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw Error(Errc::InvalidParams, "need n_per_arm >= 1 and finite noise_std >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  LabeledDataset ds;
  ds.class_names = std::move(names);
  for (std::size_t c = 0; c < corners.size(); ++c) {
    for (std::size_t k = 0; k < n_per_arm; ++k) {
      FeatureVector v = corners[c];
      if (noise_std > 0.0) {
        for (double& x : v) x += noise_std * jitter(rng);
      }
      ds.features.push_back(std::move(v));
      ds.labels.push_back(corner_class[c]);
    }
  }
  return ds;
}

}  // namespace

void LabeledDataset::validate() const {
  if (features.empty()) throw Error(Errc::EmptyInput, "dataset has no rows");
  const std::size_t d = dim();
  if (d == 0) throw Error(Errc::DimensionMismatch, "dataset has no feature columns");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) {
      throw Error(Errc::DimensionMismatch, "row " + std::to_string(i) + " has " +
                                               std::to_string(features[i].size()) + " features, expected " +
                                               std::to_string(d));
    }
    check_finite(features[i]);
  }
  if (!labels.empty()) {
    if (labels.size() != features.size()) throw Error(Errc::InvalidParams, "label count differs from row count");
    for (std::size_t l : labels) {
      if (l >= class_names.size()) throw Error(Errc::UnknownLabel, "label index outside class_names");
    }
  }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (std::size_t l : labels) ++counts[l];
  return counts;
}

std::vector<std::size_t> LabeledDataset::rows_of_class(std::size_t c) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == c) rows.push_back(i);
  }
  return rows;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.features.reserve(rows.size());
  for (std::size_t r : rows) {
    out.features.push_back(features.at(r));
    if (!labels.empty()) out.labels.push_back(labels.at(r));
  }
  return out;
}

LabeledDataset LabeledDataset::select_features(std::span<const std::size_t> columns) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.labels = labels;
  out.features.reserve(features.size());
  for (const auto& row : features) {
    FeatureVector v;
    v.reserve(columns.size());
    for (std::size_t c : columns) {
      if (c >= row.size()) {
        throw Error(Errc::DimensionMismatch,
                    "feature column " + std::to_string(c) + " outside dimension " + std::to_string(row.size()));
      }
      v.push_back(row[c]);
    }
    out.features.push_back(std::move(v));
  }
  return out;
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path.string() + "'");
  return parse_csv(in, options, path.string());
}

LabeledDataset parse_csv(std::istream& in, const CsvOptions& options, std::string_view source) {
  LabeledDataset ds;
  std::map<std::string, std::size_t, std::less<>> label_index;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool header_pending = options.has_header;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line, options.delimiter);
    if (columns == 0) {
      columns = cells.size();
    } else if (cells.size() != columns) {
      throw Error(Errc::InconsistentColumns, std::string(source) + ": line " + std::to_string(line_no) + " has " +
                                                 std::to_string(cells.size()) + " columns, expected " +
                                                 std::to_string(columns));
    }
    if (header_pending) {
      header_pending = false;
      continue;
    }

    std::size_t label_col = columns;  // none
    if (options.label_column.kind == LabelColumn::Kind::Last) {
      label_col = columns - 1;
    } else if (options.label_column.kind == LabelColumn::Kind::Index) {
      label_col = options.label_column.index;
      if (label_col >= columns) {
        throw Error(Errc::InconsistentColumns, std::string(source) + ": label column " + std::to_string(label_col) +
                                                   " outside " + std::to_string(columns) + " columns");
      }
    }
    const bool has_label = label_col < columns;
    if (columns - (has_label ? 1 : 0) == 0) {
      throw Error(Errc::InconsistentColumns, std::string(source) + ": no feature columns");
    }

    FeatureVector row;
    row.reserve(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_col) continue;
      double value = 0.0;
      if (!parse_double(cells[c], value)) {
        throw Error(Errc::ParseError, std::string(source) + ": row " + std::to_string(line_no) + ", column " +
                                          std::to_string(c + 1) + ": '" + std::string(cells[c]) +
                                          "' is not a finite number");
      }
      row.push_back(value);
    }
    ds.features.push_back(std::move(row));

    if (has_label) {
      const std::string_view label = cells[label_col];
      auto it = label_index.find(label);
      if (it == label_index.end()) {
        it = label_index.emplace(std::string(label), ds.class_names.size()).first;
        ds.class_names.emplace_back(label);
      }
      ds.labels.push_back(it->second);
    }
  }
  if (ds.features.empty()) throw Error(Errc::EmptyFile, std::string(source) + " contains no data rows");
  return ds;
}

std::size_t count_csv_columns(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) return split_line(line, delimiter).size();
  }
  throw Error(Errc::EmptyFile, path.string() + " contains no data rows");
}

void write_csv(std::ostream& out, const LabeledDataset& dataset, char delimiter) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& row = dataset.features[i];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << delimiter;
      out << format_double(row[c]);
    }
    if (!dataset.labels.empty()) out << delimiter << dataset.class_names[dataset.labels[i]];
    out << '\n';
  }
}

bool StandardizationStats::any_constant() const noexcept {
  return std::find(constant.begin(), constant.end(), true) != constant.end();
}

FeatureVector StandardizationStats::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) {
    throw Error(Errc::DimensionMismatch, "standardization fitted on dimension " + std::to_string(mean.size()) +
                                             ", got " + std::to_string(x.size()));
  }
  FeatureVector z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / std[j];
  return z;
}

FeatureVector StandardizationStats::invert(std::span<const double> z) const {
  if (z.size() != mean.size()) {
    throw Error(Errc::DimensionMismatch, "standardization fitted on dimension " + std::to_string(mean.size()) +
                                             ", got " + std::to_string(z.size()));
  }
  FeatureVector x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * std[j] + mean[j];
  return x;
}

std::vector<FeatureVector> StandardizationStats::apply(std::span<const FeatureVector> rows) const {
  std::vector<FeatureVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

LabeledDataset StandardizationStats::apply(const LabeledDataset& dataset) const {
  LabeledDataset out = dataset;
  out.features = apply(std::span<const FeatureVector>(dataset.features));
  return out;
}

StandardizationStats fit_standardization(std::span<const FeatureVector> rows) {
  if (rows.size() < 2) throw Error(Errc::SingleSample, "standardization needs at least two rows");
  const std::size_t d = rows.front().size();
  StandardizationStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<bool>(d, false)};
  const auto n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(Errc::DimensionMismatch, "ragged rows in standardization input");
    for (std::size_t j = 0; j < d; ++j) stats.mean[j] += r[j];
  }
  for (double& m : stats.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) stats.std[j] += (r[j] - stats.mean[j]) * (r[j] - stats.mean[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    stats.std[j] = std::sqrt(stats.std[j] / n);
    if (!(stats.std[j] > 0.0)) {
      stats.std[j] = 1.0;
      stats.constant[j] = true;
    }
  }
  return stats;
}

std::pair<LabeledDataset, StandardizationStats> standardize(const LabeledDataset& dataset) {
  auto stats = fit_standardization(dataset.features);
  return {stats.apply(dataset), std::move(stats)};
}

TrainTestSplit split(const LabeledDataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(Errc::InvalidFraction, "test fraction " + std::to_string(test_fraction) + " outside (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t c = 0; c < dataset.class_names.size(); ++c) {
    auto rows = dataset.rows_of_class(c);
    if (rows.empty()) continue;
    if (rows.size() < 2) {
      throw Error(Errc::ClassTooSmall, "class '" + dataset.class_names[c] + "' has fewer than 2 samples");
    }
    rows = shuffled(std::move(rows), rng);
    auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(rows.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, rows.size() - 1);
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {dataset.subset(train_rows), dataset.subset(test_rows)};
}

LabeledDataset make_xor(std::size_t n_per_arm, double noise_std, std::uint64_t seed) {
  const std::vector<FeatureVector> corners{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  const std::vector<std::size_t> cls{0, 0, 1, 1};
  return make_corners(corners, cls, {"A", "B"}, n_per_arm, noise_std, seed);
}

LabeledDataset make_and(std::size_t n_per_arm, double noise_std, std::uint64_t seed) {
  const std::vector<FeatureVector> corners{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  const std::vector<std::size_t> cls{0, 1, 1, 1};
  return make_corners(corners, cls, {"TRUE", "FALSE"}, n_per_arm, noise_std, seed);
}

LabeledDataset make_blobs(std::span<const FeatureVector> centers, std::size_t n_per_class, double noise_std,
                          std::uint64_t seed) {
  if (centers.empty()) throw Error(Errc::InvalidParams, "make_blobs needs at least one centre");
  std::vector<std::size_t> cls(centers.size());
  std::iota(cls.begin(), cls.end(), std::size_t{0});
  std::vector<Label> names;
  for (std::size_t c = 0; c < centers.size(); ++c) names.push_back("c" + std::to_string(c));
  return make_corners(centers, cls, std::move(names), n_per_class, noise_std, seed);
}

}  // namespace qlear
