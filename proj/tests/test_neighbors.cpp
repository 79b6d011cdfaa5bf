#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qlear/error.hpp"
#include "qlear/neighbors.hpp"

using namespace qlear;

TEST_CASE("euclidean_distance") {
  CHECK(euclidean_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 5.0);
  CHECK(euclidean_distance(std::vector<double>{1.5, -2}, std::vector<double>{1.5, -2}) == 0.0);
  CHECK(euclidean_distance(std::vector<double>{1, 1}, std::vector<double>{-1, -1}) ==
        doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(euclidean_distance(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
}

TEST_CASE("k_nearest examples") {
  const std::vector<FeatureVector> pool{{1, 1}, {-1, -1}};
  const auto one = k_nearest(std::vector<double>{0.9, 1.0}, pool, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.indices[0] == 0);

  const auto all = k_nearest(std::vector<double>{-0.5, -0.5}, pool, 2);
  CHECK(all.indices == std::vector<std::size_t>{1, 0});
  CHECK(all.distances[0] <= all.distances[1]);

  const std::vector<FeatureVector> tie{{1, 0}, {-1, 0}};
  CHECK(k_nearest(std::vector<double>{0, 0}, tie, 1).indices[0] == 0);
}

TEST_CASE("k_nearest errors") {
  const std::vector<FeatureVector> pool{{1, 1}};
  try {
    k_nearest(std::vector<double>{0, 0}, pool, 2);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::KTooLarge);
  }
  try {
    k_nearest(std::vector<double>{0, 0}, std::vector<FeatureVector>{}, 1);
    FAIL("expected EmptyPool");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyPool);
  }
}

TEST_CASE("duplicates of the query are legal neighbours") {
  const std::vector<FeatureVector> pool{{2, 2}, {1, 1}, {1, 1}};
  const auto n = k_nearest(std::vector<double>{1, 1}, pool, 3);
  CHECK(n.indices == std::vector<std::size_t>{1, 2, 0});
  CHECK(n.distances[0] == 0.0);
}

TEST_CASE("k_nearest matches a brute-force sort and is prefix-monotone") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(1, 200), dim(1, 20);
  std::uniform_int_distribution<int> coarse(-3, 3);  // integer grid forces ties
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const int n = size(rng), d = dim(rng);
    const bool ties = t % 2 == 0;
    std::vector<FeatureVector> pool(n, FeatureVector(d));
    for (auto& v : pool)
      for (double& x : v) x = ties ? coarse(rng) : g(rng);
    FeatureVector query(d);
    for (double& x : query) x = ties ? coarse(rng) : g(rng);

    const auto full = k_nearest(query, pool, n);
    CHECK(full.indices == oracle::brute_force_knn(query, pool, n));
    std::uniform_int_distribution<int> kd(1, n);
    const int k = kd(rng);
    const auto part = k_nearest(query, pool, k);
    CHECK(std::equal(part.indices.begin(), part.indices.end(), full.indices.begin()));
  }
}
