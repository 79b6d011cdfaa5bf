#include "qlear/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qlear/error.hpp"
#include "qlear/parallel.hpp"

namespace qlear {

void validate_pools(std::span<const ClassPool> pools, bool unique_labels) {
  if (pools.empty()) throw Error(Errc::EmptyPool, "no class pools given");
  const std::size_t dim = pools.front().vectors.empty() ? 0 : pools.front().vectors.front().size();
  std::set<Label> seen;
  for (const auto& pool : pools) {
    if (pool.vectors.empty()) throw Error(Errc::EmptyPool, "pool '" + pool.label + "' is empty");
    for (const auto& v : pool.vectors) {
      if (v.size() != dim || dim == 0) {
        throw Error(Errc::DimensionMismatch, "pool '" + pool.label + "' holds a vector of dimension " +
                                                 std::to_string(v.size()) + ", expected " + std::to_string(dim));
      }
      check_finite(v);
    }
    if (unique_labels && !seen.insert(pool.label).second) {
      throw Error(Errc::InvalidParams, "duplicate class label '" + pool.label + "'");
    }
  }
}

std::size_t pool_dimension(std::span<const ClassPool> pools) {
  return pools.empty() || pools.front().vectors.empty() ? 0 : pools.front().vectors.front().size();
}

void QlearParams::validate() const {
  if (!is_valid_q(q)) throw Error(Errc::InvalidQ, "q=" + std::to_string(q) + " must be > 0 and != 1");
  if (n_s < 1 || n_ns < 1) throw Error(Errc::InvalidParams, "n_s and n_ns must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(Errc::InvalidParams, "alpha=" + std::to_string(alpha) + " must be finite and >= 0");
  }
}

double DeltaSpectra::delta(double q) const { return tsallis_entropy(after, q) - tsallis_entropy(before, q); }

DeltaSpectra delta_spectra(std::span<const FeatureVector* const> reference, std::span<const double> query,
                           GramOptions options) {
  if (reference.empty()) throw Error(Errc::EmptyInput, "entropy delta needs a non-empty reference set");
  SymmetricAccumulator acc(reference.front()->size());
  for (const FeatureVector* v : reference) accumulate(acc, *v, options);
  Spectrum before = spectrum(normalize_to_density(acc));
  accumulate(acc, query, options);
  Spectrum after = spectrum(normalize_to_density(acc));
  return {std::move(before), std::move(after)};
}

double entropy_delta(std::span<const FeatureVector> reference, std::span<const double> query, double q,
                     GramOptions options) {
  if (!is_valid_q(q)) throw Error(Errc::InvalidQ, "q=" + std::to_string(q) + " must be > 0 and != 1");
  std::vector<const FeatureVector*> refs;
  refs.reserve(reference.size());
  for (const auto& v : reference) refs.push_back(&v);
  return delta_spectra(refs, query, options).delta(q);
}

QueryNeighborhood::QueryNeighborhood(std::span<const double> query, std::span<const ClassPool> pools)
    : query_(query.begin(), query.end()), pools_(pools) {
  check_finite(query_);
  struct Entry {
    double distance;
    std::size_t pool;
    std::size_t index;
  };
  std::vector<Entry> all;
  same_.reserve(pools.size());
  for (std::size_t c = 0; c < pools.size(); ++c) {
    const auto& vectors = pools[c].vectors;
    same_.push_back(k_nearest(query_, vectors, vectors.size()));
    const auto& ranked = same_.back();
    for (std::size_t r = 0; r < ranked.size(); ++r) all.push_back({ranked.distances[r], c, ranked.indices[r]});
  }
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.pool != b.pool) return a.pool < b.pool;
    return a.index < b.index;
  });
  global_.reserve(all.size());
  for (const auto& e : all) global_.push_back({e.pool, e.index});
}

std::size_t QueryNeighborhood::effective_n_s(std::size_t class_index, std::size_t n_s) const {
  return std::min(n_s, pools_[class_index].vectors.size());
}

std::size_t QueryNeighborhood::effective_n_ns(std::size_t class_index, std::size_t n_ns) const {
  return std::min(n_ns, global_.size() - pools_[class_index].vectors.size());
}

std::vector<const FeatureVector*> QueryNeighborhood::same_class(std::size_t class_index, std::size_t n_s) const {
  const std::size_t k = effective_n_s(class_index, n_s);
  const auto& vectors = pools_[class_index].vectors;
  std::vector<const FeatureVector*> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) out.push_back(&vectors[same_[class_index].indices[r]]);
  return out;
}

std::vector<const FeatureVector*> QueryNeighborhood::other_classes(std::size_t class_index,
                                                                   std::size_t n_ns) const {
  const std::size_t k = effective_n_ns(class_index, n_ns);
  std::vector<const FeatureVector*> out;
  out.reserve(k);
  for (const auto& entry : global_) {
    if (out.size() == k) break;
    if (entry.pool == class_index) continue;
    out.push_back(&pools_[entry.pool].vectors[entry.index]);
  }
  return out;
}

DeltaSpectra QueryNeighborhood::same_class_spectra(std::size_t class_index, std::size_t n_s,
                                                   GramOptions options) const {
  return delta_spectra(same_class(class_index, n_s), query_, options);
}

DeltaSpectra QueryNeighborhood::other_class_spectra(std::size_t class_index, std::size_t n_ns,
                                                    GramOptions options) const {
  return delta_spectra(other_classes(class_index, n_ns), query_, options);
}

namespace {

void check_classification_inputs(std::span<const double> query, std::span<const ClassPool> pools,
                                 const QlearParams& params) {
  params.validate();
  if (pools.size() < 2) throw Error(Errc::SingleClass, "classification needs at least two class pools");
  validate_pools(pools);
  if (query.size() != pool_dimension(pools)) {
    throw Error(Errc::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                             ", pools have dimension " + std::to_string(pool_dimension(pools)));
  }
}

ClassScore score_class(const QueryNeighborhood& hood, std::span<const ClassPool> pools, std::size_t class_index,
                       const QlearParams& params) {
  ClassScore s;
  s.label = pools[class_index].label;
  s.de_s = hood.same_class_spectra(class_index, params.n_s, params.gram_options()).delta(params.q);
  s.de_ns = hood.other_class_spectra(class_index, params.n_ns, params.gram_options()).delta(params.q);
  s.score = s.de_s - params.alpha * s.de_ns;
  return s;
}

Prediction classify_checked(std::span<const double> query, std::span<const ClassPool> pools,
                            const QlearParams& params) {
  const QueryNeighborhood hood(query, pools);
  std::vector<ClassScore> scores;
  scores.reserve(pools.size());
  for (std::size_t c = 0; c < pools.size(); ++c) scores.push_back(score_class(hood, pools, c, params));
  return select_min(std::move(scores));
}

}  // namespace

Prediction select_min(std::vector<ClassScore> scores) {
  if (scores.empty()) throw Error(Errc::EmptyInput, "no class scores to choose from");
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c].score < scores[best].score) best = c;
  }
  Prediction p;
  p.class_index = best;
  p.label = scores[best].label;
  p.scores = std::move(scores);
  return p;
}

ClassScore class_score(std::span<const double> query, std::span<const ClassPool> pools, std::size_t class_index,
                       const QlearParams& params) {
  check_classification_inputs(query, pools, params);
  if (class_index >= pools.size()) {
    throw Error(Errc::InvalidParams, "class index " + std::to_string(class_index) + " out of range");
  }
  const QueryNeighborhood hood(query, pools);
  return score_class(hood, pools, class_index, params);
}

Prediction classify(std::span<const double> query, std::span<const ClassPool> pools, const QlearParams& params) {
  check_classification_inputs(query, pools, params);
  return classify_checked(query, pools, params);
}

std::vector<Prediction> classify_batch(std::span<const FeatureVector> queries, std::span<const ClassPool> pools,
                                       const QlearParams& params, std::size_t workers) {
  std::vector<Prediction> out(queries.size());
  if (queries.empty()) return out;
  params.validate();
  if (pools.size() < 2) throw Error(Errc::SingleClass, "classification needs at least two class pools");
  validate_pools(pools);
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    try {
      if (queries[i].size() != pool_dimension(pools)) {
        throw Error(Errc::DimensionMismatch, "query has dimension " + std::to_string(queries[i].size()) +
                                                 ", pools have dimension " + std::to_string(pool_dimension(pools)));
      }
      out[i] = classify_checked(queries[i], pools, params);
    } catch (const Error& e) {
      throw Error(e.code(), "query " + std::to_string(i) + ": " + e.detail());
    }
  });
  return out;
}

Prediction simple_classify(std::span<const double> query, std::span<const ClassPool> subclasses, double q,
                           GramOptions options) {
  if (!is_valid_q(q)) throw Error(Errc::InvalidQ, "q=" + std::to_string(q) + " must be > 0 and != 1");
  validate_pools(subclasses, /*unique_labels=*/false);
  if (query.size() != pool_dimension(subclasses)) {
    throw Error(Errc::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                             ", subclasses have dimension " +
                                             std::to_string(pool_dimension(subclasses)));
  }
  std::vector<ClassScore> scores;
  scores.reserve(subclasses.size());
  for (const auto& sub : subclasses) {
    const double d = entropy_delta(sub.vectors, query, q, options);
    scores.push_back({sub.label, d, 0.0, d});
  }
  return select_min(std::move(scores));
}

}  // namespace qlear
