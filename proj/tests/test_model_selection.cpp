#include "doctest.h"

#include <algorithm>
#include <random>
#include <tuple>

#include "oracles.hpp"
#include "qlear/dataset.hpp"
#include "qlear/error.hpp"
#include "qlear/model_selection.hpp"

using namespace qlear;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no qlear::Error thrown");
  return Errc::EmptyInput;
}

LabeledDataset iris() { return load_csv(std::string(QLEAR_TEST_DATA_DIR) + "/iris.csv"); }

std::vector<ClassPool> two_gaussians(std::size_t n, std::uint64_t seed) {
  const std::vector<FeatureVector> centres{{6, 1}, {1, 6}};
  const auto data = make_blobs(centres, n, 0.3, seed);
  std::vector<ClassPool> pools;
  for (std::size_t c = 0; c < data.class_names.size(); ++c) {
    ClassPool pool{data.class_names[c], {}};
    for (std::size_t r : data.rows_of_class(c)) pool.vectors.push_back(data.features[r]);
    pools.push_back(std::move(pool));
  }
  return pools;
}

// Folds rebuilt from the documented protocol: one mt19937_64 stream, each pool
// shuffled in class order, the first floor(n/2) shuffled positions form fold 0.
std::vector<std::vector<ClassPool>> rebuild_folds(const std::vector<ClassPool>& pools, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<ClassPool>> folds(2);
  for (const auto& pool : pools) {
    std::vector<std::size_t> order(pool.vectors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t half = order.size() / 2;
    std::vector<std::size_t> a(order.begin(), order.begin() + half), b(order.begin() + half, order.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ClassPool fa{pool.label, {}}, fb{pool.label, {}};
    for (std::size_t i : a) fa.vectors.push_back(pool.vectors[i]);
    for (std::size_t i : b) fb.vectors.push_back(pool.vectors[i]);
    folds[0].push_back(fa);
    folds[1].push_back(fb);
  }
  return folds;
}

}  // namespace

TEST_CASE("ParamGrid") {
  const auto g = ParamGrid::defaults();
  CHECK(g.size() == 8 * 9 * 5 * 5);
  const auto pts = g.points();
  REQUIRE(pts.size() == g.size());
  CHECK(pts.front() == QlearParams{0.03, 1, 1, 0.0});
  CHECK(pts[1] == QlearParams{0.03, 1, 1, 0.25});
  CHECK(pts[5] == QlearParams{0.03, 1, 2, 0.0});
  CHECK(pts.back() == QlearParams{2.0, 29, 6, 1.0});
  CHECK_NOTHROW(g.validate());

  auto empty = g;
  empty.alpha_values.clear();
  CHECK(code_of([&] { empty.validate(); }) == Errc::InvalidGrid);
  auto dup = g;
  dup.n_s_values.push_back(1);
  CHECK(code_of([&] { dup.validate(); }) == Errc::InvalidGrid);
  auto bad_q = g;
  bad_q.q_values = {1.0};
  CHECK(code_of([&] { bad_q.validate(); }) == Errc::InvalidQ);

  const QlearParams p{1.5, 3, 2, 0.25, true};
  CHECK(ParamGrid::single(p).points() == std::vector<QlearParams>{p});
}

TEST_CASE("sample_pools: floor rule and determinism") {
  const auto data = iris();
  const auto a = sample_pools(data, 0.5, 3);
  REQUIRE(a.pools.size() == 3);
  for (const auto& pool : a.pools) CHECK(pool.vectors.size() == 25);
  CHECK(a.holdout.size() == 75);
  CHECK(a.holdout.class_counts() == std::vector<std::size_t>{25, 25, 25});

  const auto b = sample_pools(data, 0.5, 3);
  for (std::size_t c = 0; c < 3; ++c) CHECK(a.pools[c].vectors == b.pools[c].vectors);
  CHECK(a.holdout.features == b.holdout.features);
  CHECK(sample_pools(data, 0.5, 4).pools[0].vectors != a.pools[0].vectors);

  const auto small = sample_pools(data, 0.1, 0);
  for (const auto& pool : small.pools) CHECK(pool.vectors.size() == 5);
  const auto tiny = sample_pools(data, 0.001, 0);
  for (const auto& pool : tiny.pools) CHECK(pool.vectors.size() == 1);
}

TEST_CASE("sample_pools: every row lands in exactly one place") {
  const auto data = iris();
  const auto s = sample_pools(data, 0.3, 11);
  std::vector<FeatureVector> all;
  for (const auto& pool : s.pools) all.insert(all.end(), pool.vectors.begin(), pool.vectors.end());
  all.insert(all.end(), s.holdout.features.begin(), s.holdout.features.end());
  auto expected = data.features;
  std::sort(all.begin(), all.end());
  std::sort(expected.begin(), expected.end());
  CHECK(all == expected);
}

TEST_CASE("sample_pools: explicit positions") {
  const auto data = iris();
  std::vector<std::size_t> positions;
  for (std::size_t p = 19; p <= 33; ++p) positions.push_back(p);
  std::map<Label, std::vector<std::size_t>> by_class;
  for (const auto& name : data.class_names) by_class[name] = positions;
  const auto s = sample_pools(data, by_class);
  REQUIRE(s.pools.size() == 3);
  for (const auto& pool : s.pools) CHECK(pool.vectors.size() == 15);
  CHECK(s.holdout.size() == 105);
  CHECK(s.pools[0].vectors[0] == data.features[19]);
  CHECK(s.pools[2].vectors[14] == data.features[133]);

  CHECK(code_of([&] { sample_pools(data, {{"nope", {0}}}); }) == Errc::UnknownLabel);
  CHECK(code_of([&] { sample_pools(data, {{data.class_names[0], {50}}}); }) == Errc::InvalidParams);
}

TEST_CASE("sample_pools: errors") {
  const auto data = iris();
  CHECK(code_of([&] { sample_pools(data, 0.0, 0); }) == Errc::InvalidFraction);
  CHECK(code_of([&] { sample_pools(data, 0.6, 0); }) == Errc::InvalidFraction);
  LabeledDataset lonely{{{1, 1}, {2, 2}, {3, 3}}, {0, 0, 1}, {"a", "b"}};
  CHECK(code_of([&] { sample_pools(lonely, 0.5, 0); }) == Errc::ClassTooSmall);
}

TEST_CASE("two_fold_cv: single-point grid") {
  const auto pools = two_gaussians(10, 1);
  const QlearParams p{2.0, 3, 2, 0.5};
  const auto r = two_fold_cv(pools, ParamGrid::single(p), 9);
  CHECK(r.best == p);
  CHECK(r.table.size() == 1);
  CHECK(r.n_samples == 20);
  CHECK(r.cv_error == r.table[0].cv_error);
}

TEST_CASE("two_fold_cv: XOR corners") {
  std::vector<ClassPool> pools{{"A", {}}, {"B", {}}};
  for (int i = 0; i < 4; ++i) {
    pools[0].vectors.push_back({1, 1});
    pools[0].vectors.push_back({-1, -1});
    pools[1].vectors.push_back({1, -1});
    pools[1].vectors.push_back({-1, 1});
  }
  ParamGrid grid{{2.0}, {2}, {2}, {0.0, 0.5}};
  const auto r = two_fold_cv(pools, grid, 0);
  for (const auto& e : r.table) CHECK(e.errors == 0);
  CHECK(r.best.alpha == 0.0);
  CHECK(r.cv_error == 0.0);
}

TEST_CASE("two_fold_cv: separable data resolves ties toward the smallest parameters") {
  const auto pools = two_gaussians(12, 5);
  ParamGrid grid{{2.0, 0.5}, {5, 3}, {4, 2}, {0.5, 0.25}};
  const auto r = two_fold_cv(pools, grid, 2);
  for (const auto& e : r.table) REQUIRE(e.errors == 0);
  CHECK(r.best == QlearParams{0.5, 3, 2, 0.25});
}

TEST_CASE("two_fold_cv: table covers the grid and best is the lexicographic minimum") {
  const auto data = iris();
  const auto s = sample_pools(data, 0.5, 1);
  ParamGrid grid{{0.5, 2.0}, {1, 5, 13}, {1, 4}, {0.0, 0.5, 1.0}};
  const auto r = two_fold_cv(s.pools, grid, 1);
  REQUIRE(r.table.size() == grid.size());
  const auto pts = grid.points();
  auto key = [](const GridEntry& e) {
    return std::tuple(e.errors, e.params.n_s, e.params.n_ns, e.params.q, e.params.alpha);
  };
  const GridEntry* best = &r.table[0];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(r.table[i].params == pts[i]);
    CHECK(r.table[i].cv_error == static_cast<double>(r.table[i].errors) / 75.0);
    if (key(r.table[i]) < key(*best)) best = &r.table[i];
  }
  CHECK(r.best == best->params);
  CHECK(r.cv_error == best->cv_error);
  CHECK(r.n_samples == 75);
}

TEST_CASE("two_fold_cv: every table entry matches explicit classification of the folds") {
  const auto data = iris();
  for (std::uint64_t seed : {0u, 7u}) {
    const auto s = sample_pools(data, 0.5, seed);
    ParamGrid grid{{0.03, 1.22, 2.0}, {1, 7, 29}, {1, 6}, {0.0, 0.75}};
    const auto r = two_fold_cv(s.pools, grid, seed);
    const auto folds = rebuild_folds(s.pools, seed);
    for (const auto& entry : r.table) {
      std::size_t errors = 0;
      for (std::size_t f = 0; f < 2; ++f) {
        for (std::size_t c = 0; c < folds[f].size(); ++c) {
          for (const auto& v : folds[f][c].vectors) {
            if (classify(v, folds[1 - f], entry.params).class_index != c) ++errors;
          }
        }
      }
      CHECK(entry.errors == errors);
    }
  }
}

TEST_CASE("two_fold_cv: serial and parallel tables are identical") {
  const auto data = iris();
  const auto s = sample_pools(data, 0.5, 4);
  const auto grid = ParamGrid::defaults();
  const auto serial = two_fold_cv(s.pools, grid, 4, 1);
  const auto parallel = two_fold_cv(s.pools, grid, 4, 4);
  REQUIRE(serial.table.size() == parallel.table.size());
  for (std::size_t i = 0; i < serial.table.size(); ++i) CHECK(serial.table[i].errors == parallel.table[i].errors);
  CHECK(serial.best == parallel.best);
  const auto other_seed = two_fold_cv(s.pools, grid, 5, 1);
  CHECK(other_seed.table.size() == serial.table.size());
}

TEST_CASE("two_fold_cv: errors") {
  std::vector<ClassPool> pools{{"A", {{1, 0}, {2, 0}}}, {"B", {{0, 1}}}};
  const auto grid = ParamGrid::single({});
  CHECK(code_of([&] { two_fold_cv(pools, grid, 0); }) == Errc::PoolTooSmall);
  CHECK(code_of([&] { two_fold_cv(std::vector<ClassPool>{pools[0]}, grid, 0); }) == Errc::SingleClass);
  ParamGrid empty{{}, {1}, {1}, {0.0}};
  pools[1].vectors.push_back({0, 2});
  CHECK(code_of([&] { two_fold_cv(pools, empty, 0); }) == Errc::InvalidGrid);
}

TEST_CASE("evaluate: pools classify themselves without error at alpha = 0") {
  const auto data = iris();
  const auto s = sample_pools(data, 0.5, 0);
  LabeledDataset self;
  self.class_names = data.class_names;
  for (std::size_t c = 0; c < s.pools.size(); ++c) {
    for (const auto& v : s.pools[c].vectors) {
      self.features.push_back(v);
      self.labels.push_back(c);
    }
  }
  const QlearParams params{2.0, 1, 1, 0.0};
  const auto report = evaluate(s.pools, params, self);
  // With n_s = 1 the nearest same-class vector is the query itself, so its
  // delta is exactly zero; a row ties only if another class holds a duplicate.
  std::size_t oracle_errors = 0;
  for (std::size_t i = 0; i < self.size(); ++i) {
    std::vector<std::vector<oracle::Vec>> nearest;
    for (const auto& pool : s.pools) {
      const auto idx = oracle::brute_force_knn(self.features[i], pool.vectors, 1);
      nearest.push_back({pool.vectors[idx[0]]});
    }
    if (oracle::total_entropy_argmin(nearest, self.features[i], 2.0) != self.labels[i]) ++oracle_errors;
  }
  CHECK(oracle_errors == 0);
  CHECK(report.error_rate == 0.0);
  CHECK(report.correct() == self.size());
}

TEST_CASE("evaluate: confusion matrix") {
  std::vector<ClassPool> pools{{"A", {{1, 0}, {2, 0}}}, {"B", {{0, 1}, {0, 2}}}};
  LabeledDataset test{{{3, 0.1}, {0.1, 3}, {0.2, 4}, {5, 0}}, {1, 1, 0, 0}, {"B", "A"}};
  const auto r = evaluate(pools, {2.0, 2, 2, 0.0}, test);
  CHECK(r.labels == std::vector<Label>{"A", "B"});
  CHECK(r.n_samples == 4);
  // true A: (3,0.1) -> A, (0.1,3) -> B ; true B: (0.2,4) -> B, (5,0) -> A
  CHECK(r.confusion == std::vector<std::vector<std::size_t>>{{1, 1}, {1, 1}});
  CHECK(r.error_rate == 0.5);
  std::size_t total = 0;
  for (const auto& row : r.confusion)
    for (std::size_t x : row) total += x;
  CHECK(total == r.n_samples);
}

TEST_CASE("evaluate: errors") {
  std::vector<ClassPool> pools{{"A", {{1, 0}}}, {"B", {{0, 1}}}};
  LabeledDataset unknown{{{1, 1}}, {0}, {"C"}};
  CHECK(code_of([&] { evaluate(pools, {}, unknown); }) == Errc::UnknownLabel);
  LabeledDataset empty;
  CHECK(code_of([&] { evaluate(pools, {}, empty); }) == Errc::EmptyInput);
}
