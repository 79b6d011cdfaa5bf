#include "qlear/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qlear/error.hpp"

namespace qlear {

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(Errc::DimensionMismatch,
                "cannot compare vectors of dimension " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double diff = u[i] - v[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

NeighborSet k_nearest(std::span<const double> query, std::span<const FeatureVector> pool, std::size_t k) {
  if (pool.empty()) throw Error(Errc::EmptyPool, "nearest-neighbour search over an empty pool");
  if (k == 0 || k > pool.size()) {
    throw Error(Errc::KTooLarge,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(pool.size()) + "]");
  }

  std::vector<double> dist(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) dist[i] = euclidean_distance(query, pool[i]);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);

  NeighborSet out;
  out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  out.distances.reserve(k);
  for (std::size_t idx : out.indices) out.distances.push_back(dist[idx]);
  return out;
}

}  // namespace qlear
