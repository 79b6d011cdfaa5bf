#pragma once

// QLEAR decision rules.
//
// A query is scored against every class by how much it perturbs the Tsallis
// entropy of two trace-normalized states: one built from its nearest
// same-class representatives (dE_s) and one from its nearest representatives
// of all other classes (dE_ns). The predicted class minimizes
// dE_s - alpha * dE_ns.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qlear/density.hpp"
#include "qlear/neighbors.hpp"

namespace qlear {

using Label = std::string;

/// Representative vectors S_i standing in for one class or subclass.
struct ClassPool {
  Label label;
  std::vector<FeatureVector> vectors;
};

/// Throws EmptyPool, DimensionMismatch or NonFiniteInput. With
/// unique_labels, duplicated labels raise InvalidParams.
void validate_pools(std::span<const ClassPool> pools, bool unique_labels = true);

/// Dimension shared by all pool vectors (pools must be valid).
std::size_t pool_dimension(std::span<const ClassPool> pools);

struct QlearParams {
  double q = 2.0;           ///< entropy order
  std::size_t n_s = 1;      ///< same-class neighbours
  std::size_t n_ns = 1;     ///< other-class neighbours
  double alpha = 0.0;       ///< weight of the complementary-class term
  bool unit_normalize = false;

  /// Throws InvalidQ or InvalidParams.
  void validate() const;

  GramOptions gram_options() const { return {unit_normalize}; }

  friend bool operator==(const QlearParams&, const QlearParams&) = default;
};

struct ClassScore {
  Label label;
  double de_s = 0.0;
  double de_ns = 0.0;
  double score = 0.0;
};

struct Prediction {
  std::size_t class_index = 0;  ///< position of the winning pool
  Label label;
  std::vector<ClassScore> scores;  ///< one per pool, in pool order
};

/// Spectra of a reference state before and after the query joins it.
struct DeltaSpectra {
  Spectrum before;
  Spectrum after;

  /// S_q(after) - S_q(before).
  double delta(double q) const;
};

DeltaSpectra delta_spectra(std::span<const FeatureVector* const> reference, std::span<const double> query,
                           GramOptions options = {});

/// S_q(rho(reference + query)) - S_q(rho(reference)). Negative values are
/// legal. Throws EmptyInput, ZeroTrace, InvalidQ, DimensionMismatch.
double entropy_delta(std::span<const FeatureVector> reference, std::span<const double> query, double q,
                     GramOptions options = {});

/// Neighbour rankings of one query against a pool collection.
///
/// Same-class neighbours are ranked by (distance, pool index); the
/// complementary set of class i is the union of all other pools ranked by
/// (distance, class order, pool index).
class QueryNeighborhood {
 public:
  /// The pools must outlive this object.
  QueryNeighborhood(std::span<const double> query, std::span<const ClassPool> pools);

  std::size_t num_classes() const noexcept { return pools_.size(); }
  std::size_t effective_n_s(std::size_t class_index, std::size_t n_s) const;
  std::size_t effective_n_ns(std::size_t class_index, std::size_t n_ns) const;

  /// Nearest min(n_s, |S_i|) vectors of class i.
  std::vector<const FeatureVector*> same_class(std::size_t class_index, std::size_t n_s) const;
  /// Nearest min(n_ns, sum_{j != i} |S_j|) vectors outside class i.
  std::vector<const FeatureVector*> other_classes(std::size_t class_index, std::size_t n_ns) const;

  DeltaSpectra same_class_spectra(std::size_t class_index, std::size_t n_s, GramOptions options = {}) const;
  DeltaSpectra other_class_spectra(std::size_t class_index, std::size_t n_ns, GramOptions options = {}) const;

  std::span<const double> query() const noexcept { return query_; }

 private:
  struct Ranked {
    std::size_t pool;
    std::size_t index;
  };

  std::vector<double> query_;
  std::span<const ClassPool> pools_;
  std::vector<NeighborSet> same_;  // full ranking per class
  std::vector<Ranked> global_;     // all pool entries, (distance, class, index) order
};

/// Score of one class. Throws SingleClass with fewer than two pools.
ClassScore class_score(std::span<const double> query, std::span<const ClassPool> pools, std::size_t class_index,
                       const QlearParams& params);

/// Argmin over per-class scores; ties go to the earliest pool.
Prediction classify(std::span<const double> query, std::span<const ClassPool> pools, const QlearParams& params);

/// Element-wise classify. Results are in input order and identical for any
/// worker count (0 = one per hardware thread). A failure is rethrown with the
/// query index prepended to its message.
std::vector<Prediction> classify_batch(std::span<const FeatureVector> queries, std::span<const ClassPool> pools,
                                       const QlearParams& params, std::size_t workers = 1);

/// Subclass rule: the query joins whichever subclass whose total-entropy
/// increase is smallest, and inherits that subclass's label. Labels may
/// repeat across subclasses. Only the joined subclass's entropy changes, so
/// this is the argmin of per-subclass entropy_delta. Scores carry de_s = the
/// delta, de_ns = 0.
Prediction simple_classify(std::span<const double> query, std::span<const ClassPool> subclasses, double q,
                           GramOptions options = {});

/// Picks the minimal score, earliest index on ties.
Prediction select_min(std::vector<ClassScore> scores);

}  // namespace qlear
