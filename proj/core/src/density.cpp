#include "qlear/density.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "qlear/error.hpp"

namespace qlear {
namespace {

constexpr double kTraceTolerance = 1e-12;
constexpr double kNegativeEigenTolerance = 1e-10;
constexpr double kSpectrumSumTolerance = 1e-10;
constexpr double kUnitTolerance = 1e-9;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> symmetric_eigenvalues(std::size_t dim, std::span<const double> row_major) {
  Eigen::Map<const RowMajorMatrix> m(row_major.data(), static_cast<Eigen::Index>(dim),
                                     static_cast<Eigen::Index>(dim));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::EigensolverFailure, "symmetric eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

void check_symmetric(std::size_t dim, std::span<const double> row_major, const char* what) {
  if (dim == 0 || row_major.size() != dim * dim) {
    throw Error(Errc::DimensionMismatch, std::string(what) + ": expected " + std::to_string(dim * dim) +
                                             " entries, got " + std::to_string(row_major.size()));
  }
  check_finite(row_major);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (row_major[i * dim + j] != row_major[j * dim + i]) {
        throw Error(Errc::InvalidParams, std::string(what) + " is not symmetric");
      }
    }
  }
}

}  // namespace

void check_finite(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(Errc::NonFiniteInput, "component " + std::to_string(i) + " is not finite");
    }
  }
}

SymmetricAccumulator::SymmetricAccumulator(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim == 0) throw Error(Errc::DimensionMismatch, "accumulator dimension must be at least 1");
}

void SymmetricAccumulator::add(std::span<const double> v) {
  if (v.size() != dim_) {
    throw Error(Errc::DimensionMismatch,
                "vector of dimension " + std::to_string(v.size()) + " added to " + std::to_string(dim_) +
                    "-dimensional accumulator");
  }
  check_finite(v);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double& lower = entries_[i * dim_ + j];
      lower += v[i] * v[j];
      entries_[j * dim_ + i] = lower;
    }
    total_weight_ += v[i] * v[i];
  }
}

double SymmetricAccumulator::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

void accumulate(SymmetricAccumulator& accumulator, std::span<const double> v, GramOptions options) {
  if (!options.unit_normalize) {
    accumulator.add(v);
    return;
  }
  check_finite(v);
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm == 0.0) {
    accumulator.add(v);
    return;
  }
  std::vector<double> scaled(v.begin(), v.end());
  for (double& x : scaled) x /= norm;
  accumulator.add(scaled);
}

SymmetricAccumulator gram_accumulate(std::span<const FeatureVector> vectors, GramOptions options) {
  if (vectors.empty()) throw Error(Errc::EmptyInput, "cannot accumulate an empty vector set");
  SymmetricAccumulator acc(vectors.front().size());
  for (const auto& v : vectors) accumulate(acc, v, options);
  return acc;
}

DensityMatrix DensityMatrix::from_entries(std::size_t dim, std::vector<double> row_major) {
  check_symmetric(dim, row_major, "density matrix");
  DensityMatrix rho(dim, std::move(row_major));
  if (std::abs(rho.trace() - 1.0) > kTraceTolerance) {
    throw Error(Errc::InvalidParams, "density matrix trace " + std::to_string(rho.trace()) + " is not 1");
  }
  return rho;
}

double DensityMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

DensityMatrix normalize_to_density(const SymmetricAccumulator& accumulator) {
  const double t = accumulator.trace();
  if (!(t > 0.0)) throw Error(Errc::ZeroTrace, "accumulator has zero trace (only zero vectors were added)");
  std::vector<double> entries(accumulator.entries().begin(), accumulator.entries().end());
  for (double& x : entries) x /= t;
  return DensityMatrix(accumulator.dim(), std::move(entries));
}

Spectrum Spectrum::from_probabilities(std::vector<double> probabilities) {
  if (probabilities.empty()) throw Error(Errc::EmptyInput, "spectrum needs at least one value");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidParams, "spectrum value outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSpectrumSumTolerance) {
    throw Error(Errc::InvalidParams, "spectrum does not sum to 1");
  }
  std::sort(probabilities.begin(), probabilities.end(), std::greater<>());
  return Spectrum(std::move(probabilities));
}

Spectrum clamp_spectrum(std::vector<double> raw) {
  if (raw.empty()) throw Error(Errc::EmptyInput, "spectrum needs at least one value");
  const double largest = *std::max_element(raw.begin(), raw.end());
  const double floor = -kNegativeEigenTolerance * std::max(1.0, largest);
  for (double value : raw) {
    if (!std::isfinite(value) || value < floor) {
      throw Error(Errc::EigensolverFailure,
                  "eigenvalue " + std::to_string(value) + " violates positive semidefiniteness");
    }
  }
  // |lambda| <= tol is solver noise on a rank-deficient state: exact zero.
  for (double& value : raw) value = value <= -floor ? 0.0 : std::min(value, 1.0);
  std::sort(raw.begin(), raw.end(), std::greater<>());
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(sum > 0.0)) throw Error(Errc::EigensolverFailure, "spectrum sums to zero");
  if (std::abs(sum - 1.0) > kTraceTolerance) {
    for (double& value : raw) value /= sum;
  }
  return Spectrum::from_probabilities(std::move(raw));
}

Spectrum spectrum(const DensityMatrix& rho) {
  return clamp_spectrum(symmetric_eigenvalues(rho.dim(), rho.entries()));
}

bool is_valid_q(double q) noexcept { return std::isfinite(q) && q > 0.0 && std::abs(q - 1.0) > 1e-9; }

double tsallis_entropy(const Spectrum& s, double q) {
  if (!is_valid_q(q)) {
    throw Error(Errc::InvalidQ, "entropy order q=" + std::to_string(q) + " must be > 0 and != 1");
  }
  double power_sum = 0.0;
  for (double p : s.eigenvalues()) {
    if (p > 0.0) power_sum += std::pow(p, q);
  }
  return std::max(0.0, (power_sum - 1.0) / (1.0 - q));
}

double shannon_entropy_limit(const Spectrum& s) {
  double h = 0.0;
  for (double p : s.eigenvalues()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

MeasurementOperator MeasurementOperator::from_entries(std::size_t dim, std::vector<double> row_major) {
  check_symmetric(dim, row_major, "measurement operator");
  const auto values = symmetric_eigenvalues(dim, row_major);
  if (*std::min_element(values.begin(), values.end()) < -kNegativeEigenTolerance) {
    throw Error(Errc::InvalidParams, "measurement operator is not positive semidefinite");
  }
  return MeasurementOperator(dim, std::move(row_major));
}

MeasurementOperator MeasurementOperator::projector(std::span<const double> a) {
  if (a.empty()) throw Error(Errc::EmptyInput, "projector needs a non-empty vector");
  check_finite(a);
  const double norm = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
  if (std::abs(norm - 1.0) > kUnitTolerance) {
    throw Error(Errc::NonUnitVector, "projector vector has norm " + std::to_string(norm));
  }
  const std::size_t d = a.size();
  std::vector<double> m(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = a[i] * a[j];
  }
  return MeasurementOperator(d, std::move(m));
}

double born_probability(const DensityMatrix& rho, const MeasurementOperator& m) {
  if (rho.dim() != m.dim()) {
    throw Error(Errc::DimensionMismatch, "density matrix is " + std::to_string(rho.dim()) +
                                             "-dimensional, measurement is " + std::to_string(m.dim()));
  }
  // trace(rho m) = sum_ij rho_ij m_ji
  double p = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) p += rho(i, j) * m(j, i);
  }
  return p;
}

double born_probability(const DensityMatrix& rho, std::span<const double> a) {
  if (rho.dim() != a.size()) {
    throw Error(Errc::DimensionMismatch, "density matrix is " + std::to_string(rho.dim()) +
                                             "-dimensional, vector is " + std::to_string(a.size()));
  }
  return born_probability(rho, MeasurementOperator::projector(a));
}

}  // namespace qlear
