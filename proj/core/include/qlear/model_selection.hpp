#pragma once

// Representative-pool sampling, evaluation and 2-fold cross-validated grid
// search over (q, n_s, n_ns, alpha).

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qlear/classifier.hpp"
#include "qlear/dataset.hpp"

namespace qlear {

struct ParamGrid {
  std::vector<double> q_values;
  std::vector<std::size_t> n_s_values;
  std::vector<std::size_t> n_ns_values;
  std::vector<double> alpha_values;
  bool unit_normalize = false;

  /// q/n_s/n_ns taken from the settings reported on the UCI benchmarks,
  /// alpha spanning [0, 1].
  static ParamGrid defaults();
  /// Single-point grid.
  static ParamGrid single(const QlearParams& params);

  /// Throws InvalidGrid (empty list, duplicate value) or InvalidQ.
  void validate() const;
  std::size_t size() const noexcept;
  /// Canonical order: q outermost, then n_s, n_ns, alpha innermost.
  std::vector<QlearParams> points() const;

  friend bool operator==(const ParamGrid&, const ParamGrid&) = default;
};

struct GridEntry {
  QlearParams params;
  std::size_t errors = 0;
  double cv_error = 0.0;
};

struct GridSearchResult {
  QlearParams best;
  double cv_error = 0.0;
  std::size_t n_samples = 0;
  std::vector<GridEntry> table;  ///< canonical grid order
};

struct EvaluationReport {
  double error_rate = 0.0;
  /// confusion[true][predicted], both in pool order.
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n_samples = 0;
  std::vector<Label> labels;

  std::size_t correct() const noexcept;
};

struct PoolSample {
  std::vector<ClassPool> pools;  ///< dataset class order
  LabeledDataset holdout;
};

/// Stratified seeded sampling of floor(fraction * n_c) representatives per
/// class (at least one). Throws InvalidFraction, ClassTooSmall.
PoolSample sample_pools(const LabeledDataset& dataset, double fraction, std::uint64_t seed);

/// Pools from explicit 0-based within-class row positions, keyed by class
/// name. Classes without an entry fall back to nothing and are omitted.
/// Throws UnknownLabel, InvalidParams (position out of range).
PoolSample sample_pools(const LabeledDataset& dataset,
                        const std::map<Label, std::vector<std::size_t>>& positions);

/// Grid search with stratified seeded 2-fold cross-validation over the pool
/// vectors. Best = fewest errors, then smaller n_s, n_ns, q, alpha.
/// Throws PoolTooSmall, InvalidGrid, SingleClass.
GridSearchResult two_fold_cv(std::span<const ClassPool> pools, const ParamGrid& grid, std::uint64_t seed,
                             std::size_t workers = 1);

/// Throws EmptyInput, UnknownLabel.
EvaluationReport evaluate(std::span<const ClassPool> pools, const QlearParams& params, const LabeledDataset& test,
                          std::size_t workers = 1);

/// Same report from predictions computed elsewhere; test labels are mapped
/// onto the pool labels by name.
EvaluationReport evaluation_report(std::span<const ClassPool> pools, const LabeledDataset& test,
                                   std::span<const Prediction> predictions);

}  // namespace qlear
