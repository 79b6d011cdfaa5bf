#pragma once

// Benchmark harness: per dataset and seed, sample half of every class as the
// representative pools, select parameters by 2-fold CV on the pools and
// measure the error on the remaining samples.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlear/dataset.hpp"
#include "qlear/model_selection.hpp"

namespace qlear {

/// Published figures for a UCI benchmark dataset, for side-by-side reporting.
struct ReportedResult {
  std::string name;
  std::size_t pool_max = 0;
  std::size_t n_s = 0;
  std::size_t n_ns = 0;
  double q = 0.0;
  double error_percent = 0.0;
};

/// Matches a dataset name (case-insensitive substring, e.g. "iris.csv",
/// "pima-indians-diabetes") against the known benchmark rows.
std::optional<ReportedResult> reported_result(std::string_view dataset_name);

struct BenchmarkConfig {
  std::size_t seeds = 5;
  std::uint64_t first_seed = 0;
  double pool_fraction = 0.5;
  ParamGrid grid = ParamGrid::defaults();
  bool standardize = false;
  CsvOptions csv;
  std::size_t workers = 1;
};

struct BenchmarkRun {
  std::uint64_t seed = 0;
  std::size_t pool_size_max = 0;
  std::size_t n_pool = 0;
  std::size_t n_holdout = 0;
  QlearParams chosen;
  double cv_error = 0.0;
  double test_error = 0.0;  ///< fraction in [0, 1]
  double seconds = 0.0;     ///< wall time, excluded from determinism checks
};

struct BenchmarkRow {
  std::string dataset;
  std::string path;
  bool ok = true;
  std::string error;
  std::vector<BenchmarkRun> runs;
  std::optional<ReportedResult> reported;

  double mean_error() const;
  /// Sample standard deviation of test_error over seeds (0 for one run).
  double error_spread() const;
};

BenchmarkRow benchmark_dataset(const LabeledDataset& dataset, std::string name, const BenchmarkConfig& config);

/// One row per path. A failing dataset is marked !ok and the rest still run.
std::vector<BenchmarkRow> run_benchmark(std::span<const std::filesystem::path> paths, const BenchmarkConfig& config);

/// One line per run: dataset,status,seed,pool_size_max,n_pool,n_holdout,q,n_s,n_ns,alpha,
/// cv_error,test_error_pct,runtime_s. Failed datasets get one line with the error.
void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows);
std::string benchmark_json(std::span<const BenchmarkRow> rows, const BenchmarkConfig& config);
/// Human-readable summary with mean +- spread and the published figures.
void write_benchmark_summary(std::ostream& out, std::span<const BenchmarkRow> rows);

}  // namespace qlear
