#pragma once

// Exact Euclidean nearest-neighbour selection over representative pools.

#include <cstddef>
#include <span>
#include <vector>

#include "qlear/density.hpp"

namespace qlear {

/// The k closest pool entries, ordered by (distance, pool index).
struct NeighborSet {
  std::vector<std::size_t> indices;
  std::vector<double> distances;

  std::size_t size() const noexcept { return indices.size(); }
};

/// ||u - v||_2. Throws DimensionMismatch.
double euclidean_distance(std::span<const double> u, std::span<const double> v);

/// Brute-force scan. Ties in distance go to the lower pool index, so the
/// result for k is always a prefix of the result for k + 1.
/// Throws EmptyPool, KTooLarge (also for k == 0), DimensionMismatch.
NeighborSet k_nearest(std::span<const double> query, std::span<const FeatureVector> pool, std::size_t k);

}  // namespace qlear
