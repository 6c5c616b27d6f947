#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace entwit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default absolute tolerance for state validation (Hermiticity, trace,
// positive semidefiniteness, unit norm). Eigensolver noise at the matrix
// sizes handled here sits near 1e-13, so 1e-9 leaves ample margin.
inline constexpr double kValidationTol = 1e-9;

/// Particle count and per-particle dimensions of a composite system.
///
/// Basis states of particle j are labelled 0..N_j-1 and product basis
/// states are flattened row-major, particle 0 most significant:
///   index = (((i_0 * N_1) + i_1) * N_2 + i_2) * ...
/// This convention is used by every type and operation in the library.
class SystemShape {
 public:
  explicit SystemShape(std::vector<int> dims);

  int particles() const { return static_cast<int>(dims_.size()); }
  int dim(int particle) const { return dims_.at(static_cast<size_t>(particle)); }
  const std::vector<int>& dims() const { return dims_; }
  Index total_dim() const { return total_dim_; }
  int min_dim() const { return min_dim_; }
  Index stride(int particle) const { return strides_.at(static_cast<size_t>(particle)); }

  Index flatten(std::span<const int> multi_index) const;
  std::vector<int> unflatten(Index index) const;

  bool operator==(const SystemShape& other) const { return dims_ == other.dims_; }
  std::string to_string() const;  // e.g. "2x2x3"

 private:
  std::vector<int> dims_;
  std::vector<Index> strides_;
  Index total_dim_ = 0;
  int min_dim_ = 0;
};

/// A proper, nonempty split of the particle set into two subsystems.
///
/// Only the side that excludes particle 0 is stored, so each unordered
/// split has exactly one representation. b_side() is the subsystem that
/// gets transposed, traced out, or used as the column index in matricize.
class Bipartition {
 public:
  Bipartition(std::vector<int> side, int particle_count);

  const std::vector<int>& b_side() const { return b_side_; }
  std::vector<int> a_side() const;
  int particle_count() const { return particle_count_; }
  bool contains(int particle) const;

  /// All canonical bipartitions of an m-particle system, 2^(m-1)-1 of them,
  /// in a fixed deterministic order.
  static std::vector<Bipartition> enumerate(int particle_count);

  bool operator==(const Bipartition& other) const {
    return particle_count_ == other.particle_count_ && b_side_ == other.b_side_;
  }
  std::string to_string() const;  // e.g. "{0,2}|{1}"

 private:
  std::vector<int> b_side_;  // sorted, never contains particle 0
  int particle_count_ = 0;
};

/// Unit-norm complex amplitude vector over the product basis of `shape`.
class PureState {
 public:
  PureState(SystemShape shape, Vector amplitudes, double tol = kValidationTol);

  const SystemShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  SystemShape shape_;
  Vector amplitudes_;
};

/// Hermitian, positive-semidefinite, trace-one operator on the product
/// space. Inputs Hermitian only up to `tol` are symmetrized on
/// construction; anything worse is rejected.
class DensityMatrix {
 public:
  DensityMatrix(SystemShape shape, Matrix matrix, double tol = kValidationTol);

  static DensityMatrix from_pure(const PureState& psi, double tol = kValidationTol);

  const SystemShape& shape() const { return shape_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  SystemShape shape_;
  Matrix matrix_;
};

/// Real spectrum of a Hermitian matrix, sorted ascending.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  double sum() const;
};

}  // namespace entwit
