#pragma once

// Density matrices built from vector sets, their spectra, Born-rule
// probabilities and quantum Tsallis entropy.

#include <cstddef>
#include <span>
#include <vector>

namespace qlear {

using FeatureVector = std::vector<double>;

/// Throws NonFiniteInput if any component is NaN or infinite.
void check_finite(std::span<const double> v);

/// Dense symmetric d x d matrix accumulating outer products v v^T.
///
/// Only the lower triangle is updated; the upper triangle is mirrored on
/// every write so entries(i, j) == entries(j, i) holds bit-for-bit.
class SymmetricAccumulator {
 public:
  explicit SymmetricAccumulator(std::size_t dim);

  /// Adds v v^T. Throws DimensionMismatch or NonFiniteInput.
  void add(std::span<const double> v);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
  double trace() const noexcept;
  /// Sum of squared norms of the added vectors.
  double total_weight() const noexcept { return total_weight_; }
  /// Row-major entries.
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t dim_;
  std::vector<double> entries_;
  double total_weight_ = 0.0;
};

struct GramOptions {
  /// Scale each non-zero vector to unit length before accumulating.
  bool unit_normalize = false;
};

/// Adds v v^T to the accumulator, honouring options.unit_normalize (zero
/// vectors are added unchanged).
void accumulate(SymmetricAccumulator& accumulator, std::span<const double> v, GramOptions options = {});

/// A = sum_k v_k v_k^T. Throws EmptyInput, DimensionMismatch, NonFiniteInput.
SymmetricAccumulator gram_accumulate(std::span<const FeatureVector> vectors, GramOptions options = {});

/// Symmetric positive-semidefinite matrix with unit trace.
class DensityMatrix {
 public:
  /// Validates symmetry and |trace - 1| <= 1e-12. Throws InvalidParams otherwise.
  static DensityMatrix from_entries(std::size_t dim, std::vector<double> row_major);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
  double trace() const noexcept;
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  friend DensityMatrix normalize_to_density(const SymmetricAccumulator& accumulator);
  DensityMatrix(std::size_t dim, std::vector<double> entries) : dim_(dim), entries_(std::move(entries)) {}

  std::size_t dim_;
  std::vector<double> entries_;
};

/// rho = A / trace(A). Throws ZeroTrace when trace(A) is not positive.
DensityMatrix normalize_to_density(const SymmetricAccumulator& accumulator);

/// Eigenvalues of a density matrix, clamped to [0, 1] and sorted descending.
class Spectrum {
 public:
  /// Builds a spectrum from a probability vector. Values must lie in [0, 1]
  /// and sum to 1 within 1e-10; they are sorted descending. Throws InvalidParams.
  static Spectrum from_probabilities(std::vector<double> probabilities);

  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }

 private:
  friend Spectrum spectrum(const DensityMatrix& rho);
  explicit Spectrum(std::vector<double> values) : eigenvalues_(std::move(values)) {}

  std::vector<double> eigenvalues_;
};

/// Clamps raw eigenvalues into a valid Spectrum.
///
/// With tol = 1e-10 * max(1, max eigenvalue): values below -tol mean the
/// source matrix was not positive semidefinite and raise EigensolverFailure;
/// values with |lambda| <= tol become exactly 0; the rest are capped at 1.
/// The result is sorted descending and renormalized when its sum drifts from
/// 1 by more than 1e-12.
Spectrum clamp_spectrum(std::vector<double> raw_eigenvalues);

/// Eigenvalues of rho. Throws EigensolverFailure on non-convergence or a
/// non-PSD input.
Spectrum spectrum(const DensityMatrix& rho);

/// Valid entropy order: q > 0 and |q - 1| > 1e-9.
bool is_valid_q(double q) noexcept;

/// S_q = (sum_i p_i^q - 1) / (1 - q), with 0^q = 0. Throws InvalidQ.
double tsallis_entropy(const Spectrum& s, double q);

/// -sum_i p_i ln p_i, the q -> 1 limit of tsallis_entropy.
double shannon_entropy_limit(const Spectrum& s);

/// Symmetric positive-semidefinite measurement operator m_x.
class MeasurementOperator {
 public:
  /// Validates symmetry and positive semidefiniteness (min eigenvalue >= -1e-10).
  static MeasurementOperator from_entries(std::size_t dim, std::vector<double> row_major);
  /// m = a a^T for a unit vector a. Throws NonUnitVector if | |a| - 1 | > 1e-9.
  static MeasurementOperator projector(std::span<const double> unit_vector);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }

 private:
  MeasurementOperator(std::size_t dim, std::vector<double> entries) : dim_(dim), entries_(std::move(entries)) {}

  std::size_t dim_;
  std::vector<double> entries_;
};

/// Born rule p = trace(rho m). Throws DimensionMismatch.
double born_probability(const DensityMatrix& rho, const MeasurementOperator& m);

/// Projector form p = a^T rho a. Throws DimensionMismatch, NonUnitVector.
double born_probability(const DensityMatrix& rho, std::span<const double> unit_vector);

}  // namespace qlear
