#include "qlear/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "qlear/error.hpp"
#include "qlear/parallel.hpp"

namespace qlear {
namespace {

template <class T>
void check_list(const std::vector<T>& values, const char* name) {
  if (values.empty()) throw Error(Errc::InvalidGrid, std::string(name) + " is empty");
  std::set<T> unique(values.begin(), values.end());
  if (unique.size() != values.size()) throw Error(Errc::InvalidGrid, std::string(name) + " has duplicate values");
}

template <class T>
std::size_t position(const std::vector<T>& values, T v) {
  return static_cast<std::size_t>(std::find(values.begin(), values.end(), v) - values.begin());
}

struct Query {
  std::size_t fold;
  std::size_t true_class;
  const FeatureVector* vector;
};

}  // namespace

ParamGrid ParamGrid::defaults() {
  return ParamGrid{
      {0.03, 0.1, 0.5, 0.95, 1.22, 1.5, 1.78, 2.0},
      {1, 3, 5, 7, 9, 13, 15, 25, 29},
      {1, 2, 4, 5, 6},
      {0.0, 0.25, 0.5, 0.75, 1.0},
      false,
  };
}

ParamGrid ParamGrid::single(const QlearParams& p) {
  return ParamGrid{{p.q}, {p.n_s}, {p.n_ns}, {p.alpha}, p.unit_normalize};
}

void ParamGrid::validate() const {
  check_list(q_values, "q_values");
  check_list(n_s_values, "n_s_values");
  check_list(n_ns_values, "n_ns_values");
  check_list(alpha_values, "alpha_values");
  for (const auto& p : points()) p.validate();
}

std::size_t ParamGrid::size() const noexcept {
  return q_values.size() * n_s_values.size() * n_ns_values.size() * alpha_values.size();
}

std::vector<QlearParams> ParamGrid::points() const {
  std::vector<QlearParams> out;
  out.reserve(size());
  for (double q : q_values)
    for (std::size_t n_s : n_s_values)
      for (std::size_t n_ns : n_ns_values)
        for (double alpha : alpha_values) out.push_back({q, n_s, n_ns, alpha, unit_normalize});
  return out;
}

std::size_t EvaluationReport::correct() const noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) c += confusion[i][i];
  return c;
}

PoolSample sample_pools(const LabeledDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 0.5)) {
    throw Error(Errc::InvalidFraction, "pool fraction " + std::to_string(fraction) + " outside (0, 0.5]");
  }
  dataset.validate();
  if (dataset.labels.empty()) throw Error(Errc::InvalidParams, "pool sampling needs labeled data");
  std::mt19937_64 rng(seed);
  PoolSample out;
  std::vector<std::size_t> holdout_rows;
  for (std::size_t c = 0; c < dataset.class_names.size(); ++c) {
    auto rows = dataset.rows_of_class(c);
    if (rows.size() < 2) {
      throw Error(Errc::ClassTooSmall, "class '" + dataset.class_names[c] + "' has " + std::to_string(rows.size()) +
                                           " samples, need at least 2");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    auto n_pool = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(rows.size())));
    n_pool = std::max<std::size_t>(n_pool, 1);
    std::vector<std::size_t> chosen(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_pool));
    std::sort(chosen.begin(), chosen.end());
    holdout_rows.insert(holdout_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_pool), rows.end());

    ClassPool pool{dataset.class_names[c], {}};
    for (std::size_t r : chosen) pool.vectors.push_back(dataset.features[r]);
    out.pools.push_back(std::move(pool));
  }
  std::sort(holdout_rows.begin(), holdout_rows.end());
  out.holdout = dataset.subset(holdout_rows);
  return out;
}

PoolSample sample_pools(const LabeledDataset& dataset, const std::map<Label, std::vector<std::size_t>>& positions) {
  dataset.validate();
  for (const auto& [name, _] : positions) {
    if (std::find(dataset.class_names.begin(), dataset.class_names.end(), name) == dataset.class_names.end()) {
      throw Error(Errc::UnknownLabel, "no class named '" + name + "'");
    }
  }
  PoolSample out;
  std::vector<bool> in_pool(dataset.size(), false);
  for (std::size_t c = 0; c < dataset.class_names.size(); ++c) {
    const auto it = positions.find(dataset.class_names[c]);
    if (it == positions.end()) continue;
    const auto rows = dataset.rows_of_class(c);
    ClassPool pool{dataset.class_names[c], {}};
    for (std::size_t p : it->second) {
      if (p >= rows.size()) {
        throw Error(Errc::InvalidParams, "position " + std::to_string(p) + " outside class '" +
                                             dataset.class_names[c] + "' of size " + std::to_string(rows.size()));
      }
      pool.vectors.push_back(dataset.features[rows[p]]);
      in_pool[rows[p]] = true;
    }
    if (!pool.vectors.empty()) out.pools.push_back(std::move(pool));
  }
  std::vector<std::size_t> holdout_rows;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    if (!in_pool[r]) holdout_rows.push_back(r);
  }
  out.holdout = dataset.subset(holdout_rows);
  return out;
}

GridSearchResult two_fold_cv(std::span<const ClassPool> pools, const ParamGrid& grid, std::uint64_t seed,
                             std::size_t workers) {
  grid.validate();
  if (pools.size() < 2) throw Error(Errc::SingleClass, "cross-validation needs at least two classes");
  validate_pools(pools);
  for (const auto& pool : pools) {
    if (pool.vectors.size() < 2) {
      throw Error(Errc::PoolTooSmall, "pool '" + pool.label + "' needs at least 2 vectors for 2-fold CV");
    }
  }

  // folds[f][c] holds the vectors of class c in fold f.
  std::mt19937_64 rng(seed);
  std::vector<std::vector<ClassPool>> folds(2);
  for (const auto& pool : pools) {
    std::vector<std::size_t> order(pool.vectors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t half = order.size() / 2;
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
    ClassPool first{pool.label, {}};
    ClassPool second{pool.label, {}};
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < half ? first : second).vectors.push_back(pool.vectors[order[i]]);
    }
    folds[0].push_back(std::move(first));
    folds[1].push_back(std::move(second));
  }

  std::vector<Query> queries;
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t c = 0; c < pools.size(); ++c) {
      for (const auto& v : folds[f][c].vectors) queries.push_back({f, c, &v});
    }
  }

  const auto points = grid.points();
  const std::size_t n_q = grid.q_values.size();
  const std::size_t n_classes = pools.size();
  const GramOptions gram{grid.unit_normalize};

  // correct[query][grid point]
  std::vector<std::vector<unsigned char>> correct(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t qi) {
    const Query& query = queries[qi];
    const auto& train = folds[1 - query.fold];
    const QueryNeighborhood hood(*query.vector, train);

    // Spectra depend only on the neighbour count, so each distinct effective
    // count is decomposed once and then evaluated for every q.
    auto deltas = [&](bool same, std::size_t c, const std::vector<std::size_t>& counts) {
      std::vector<std::vector<double>> out(counts.size(), std::vector<double>(n_q));
      std::map<std::size_t, DeltaSpectra> cache;
      for (std::size_t k = 0; k < counts.size(); ++k) {
        const std::size_t eff = same ? hood.effective_n_s(c, counts[k]) : hood.effective_n_ns(c, counts[k]);
        auto it = cache.find(eff);
        if (it == cache.end()) {
          it = cache
                   .emplace(eff, same ? hood.same_class_spectra(c, counts[k], gram)
                                      : hood.other_class_spectra(c, counts[k], gram))
                   .first;
        }
        for (std::size_t j = 0; j < n_q; ++j) out[k][j] = it->second.delta(grid.q_values[j]);
      }
      return out;
    };

    std::vector<std::vector<std::vector<double>>> de_s(n_classes);
    std::vector<std::vector<std::vector<double>>> de_ns(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      de_s[c] = deltas(true, c, grid.n_s_values);
      de_ns[c] = deltas(false, c, grid.n_ns_values);
    }

    auto& row = correct[qi];
    row.resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& params = points[p];
      const std::size_t iq = position(grid.q_values, params.q);
      const std::size_t is = position(grid.n_s_values, params.n_s);
      const std::size_t ins = position(grid.n_ns_values, params.n_ns);
      std::size_t best = 0;
      double best_score = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double score = de_s[c][is][iq] - params.alpha * de_ns[c][ins][iq];
        if (c == 0 || score < best_score) {
          best = c;
          best_score = score;
        }
      }
      row[p] = best == query.true_class ? 1 : 0;
    }
  });

  GridSearchResult result;
  result.n_samples = queries.size();
  result.table.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::size_t errors = 0;
    for (const auto& row : correct) errors += row[p] ? 0 : 1;
    result.table.push_back({points[p], errors, static_cast<double>(errors) / static_cast<double>(queries.size())});
  }

  const auto key = [](const GridEntry& e) {
    return std::make_tuple(e.errors, e.params.n_s, e.params.n_ns, e.params.q, e.params.alpha);
  };
  const auto best = std::min_element(result.table.begin(), result.table.end(),
                                     [&](const GridEntry& a, const GridEntry& b) { return key(a) < key(b); });
  result.best = best->params;
  result.cv_error = best->cv_error;
  return result;
}

EvaluationReport evaluation_report(std::span<const ClassPool> pools, const LabeledDataset& test,
                                   std::span<const Prediction> predictions) {
  if (test.size() == 0) throw Error(Errc::EmptyInput, "evaluation needs at least one test sample");
  if (test.labels.size() != test.size()) throw Error(Errc::InvalidParams, "evaluation needs labeled test data");
  if (predictions.size() != test.size()) throw Error(Errc::InvalidParams, "prediction count differs from test size");

  EvaluationReport report;
  for (const auto& pool : pools) report.labels.push_back(pool.label);
  const auto pool_index = [&](const Label& name) {
    const auto it = std::find(report.labels.begin(), report.labels.end(), name);
    if (it == report.labels.end()) throw Error(Errc::UnknownLabel, "test label '" + name + "' has no class pool");
    return static_cast<std::size_t>(it - report.labels.begin());
  };

  report.confusion.assign(pools.size(), std::vector<std::size_t>(pools.size(), 0));
  report.n_samples = test.size();
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::size_t truth = pool_index(test.class_names[test.labels[i]]);
    ++report.confusion[truth][predictions[i].class_index];
  }
  report.error_rate = 1.0 - static_cast<double>(report.correct()) / static_cast<double>(report.n_samples);
  return report;
}

EvaluationReport evaluate(std::span<const ClassPool> pools, const QlearParams& params, const LabeledDataset& test,
                          std::size_t workers) {
  if (test.size() == 0) throw Error(Errc::EmptyInput, "evaluation needs at least one test sample");
  if (test.labels.size() != test.size()) throw Error(Errc::InvalidParams, "evaluation needs labeled test data");
  for (std::size_t c : test.labels) {
    const auto& name = test.class_names[c];
    if (std::none_of(pools.begin(), pools.end(), [&](const ClassPool& p) { return p.label == name; })) {
      throw Error(Errc::UnknownLabel, "test label '" + name + "' has no class pool");
    }
  }
  const auto predictions = classify_batch(test.features, pools, params, workers);
  return evaluation_report(pools, test, predictions);
}

}  // namespace qlear
