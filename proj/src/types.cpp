#include "entwit/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace entwit {

SystemShape::SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("SystemShape: dims must be non-empty");
  }
  for (int d : dims_) {
    if (d < 2) {
      throw std::invalid_argument("SystemShape: every dimension must be >= 2");
    }
  }
  strides_.assign(dims_.size(), 1);
  for (int j = static_cast<int>(dims_.size()) - 2; j >= 0; --j) {
    strides_[j] = strides_[j + 1] * dims_[j + 1];
  }
  total_dim_ = strides_[0] * dims_[0];
  min_dim_ = *std::min_element(dims_.begin(), dims_.end());
}

Index SystemShape::flatten(std::span<const int> multi_index) const {
  if (multi_index.size() != dims_.size()) {
    throw std::invalid_argument("SystemShape::flatten: wrong multi-index length");
  }
  Index index = 0;
  for (size_t j = 0; j < dims_.size(); ++j) {
    if (multi_index[j] < 0 || multi_index[j] >= dims_[j]) {
      throw std::invalid_argument("SystemShape::flatten: digit out of range");
    }
    index += strides_[j] * multi_index[j];
  }
  return index;
}

std::vector<int> SystemShape::unflatten(Index index) const {
  if (index < 0 || index >= total_dim_) {
    throw std::invalid_argument("SystemShape::unflatten: index out of range");
  }
  std::vector<int> multi(dims_.size());
  for (size_t j = 0; j < dims_.size(); ++j) {
    multi[j] = static_cast<int>((index / strides_[j]) % dims_[j]);
  }
  return multi;
}

std::string SystemShape::to_string() const {
  std::ostringstream out;
  for (size_t j = 0; j < dims_.size(); ++j) {
    if (j > 0) out << 'x';
    out << dims_[j];
  }
  return out.str();
}

Bipartition::Bipartition(std::vector<int> side, int particle_count)
    : particle_count_(particle_count) {
  if (particle_count < 2) {
    throw std::invalid_argument("Bipartition: need at least two particles");
  }
  std::sort(side.begin(), side.end());
  side.erase(std::unique(side.begin(), side.end()), side.end());
  if (side.empty() || static_cast<int>(side.size()) >= particle_count) {
    throw std::invalid_argument("Bipartition: side must be a proper nonempty subset");
  }
  for (int p : side) {
    if (p < 0 || p >= particle_count) {
      throw std::invalid_argument("Bipartition: particle index out of range");
    }
  }
  if (side.front() == 0) {
    // canonical form: store the side that excludes particle 0
    std::vector<int> complement;
    for (int p = 0, k = 0; p < particle_count; ++p) {
      if (k < static_cast<int>(side.size()) && side[k] == p) {
        ++k;
      } else {
        complement.push_back(p);
      }
    }
    side = std::move(complement);
  }
  b_side_ = std::move(side);
}

std::vector<int> Bipartition::a_side() const {
  std::vector<int> result;
  for (int p = 0, k = 0; p < particle_count_; ++p) {
    if (k < static_cast<int>(b_side_.size()) && b_side_[k] == p) {
      ++k;
    } else {
      result.push_back(p);
    }
  }
  return result;
}

bool Bipartition::contains(int particle) const {
  return std::binary_search(b_side_.begin(), b_side_.end(), particle);
}

std::vector<Bipartition> Bipartition::enumerate(int particle_count) {
  if (particle_count < 2) {
    throw std::invalid_argument("Bipartition::enumerate: need at least two particles");
  }
  std::vector<Bipartition> result;
  const unsigned long masks = 1ul << (particle_count - 1);
  for (unsigned long mask = 1; mask < masks; ++mask) {
    std::vector<int> side;
    for (int p = 1; p < particle_count; ++p) {
      if (mask & (1ul << (p - 1))) side.push_back(p);
    }
    result.emplace_back(std::move(side), particle_count);
  }
  return result;
}

std::string Bipartition::to_string() const {
  std::ostringstream out;
  auto print_set = [&out](const std::vector<int>& set) {
    out << '{';
    for (size_t k = 0; k < set.size(); ++k) {
      if (k > 0) out << ',';
      out << set[k];
    }
    out << '}';
  };
  print_set(a_side());
  out << '|';
  print_set(b_side_);
  return out.str();
}

PureState::PureState(SystemShape shape, Vector amplitudes, double tol)
    : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != shape_.total_dim()) {
    throw std::invalid_argument("PureState: amplitude count does not match shape " +
                                shape_.to_string());
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol) {
    throw std::invalid_argument("PureState: norm " + std::to_string(norm) +
                                " violates the unit-norm invariant");
  }
}

DensityMatrix::DensityMatrix(SystemShape shape, Matrix matrix, double tol)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  const Index d = shape_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix size does not match shape " +
                                shape_.to_string());
  }
  const double herm_dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol) {
    throw std::invalid_argument("DensityMatrix: Hermiticity violated by " +
                                std::to_string(herm_dev));
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > tol) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(trace) +
                                " violates the unit-trace invariant");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    throw std::invalid_argument("DensityMatrix: eigenvalue " + std::to_string(min_eig) +
                                " violates positive semidefiniteness");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi, double tol) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(psi.shape(), v * v.adjoint(), tol);
}

double HermitianSpectrum::sum() const {
  double total = 0.0;
  for (double value : eigenvalues) total += value;
  return total;
}

}  // namespace entwit
