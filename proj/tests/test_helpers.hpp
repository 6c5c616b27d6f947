#pragma once

#include "entwit/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace entwit::test {

template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Fully entangled fraction of a two-qubit state: the maximal MES overlap
// equals the top eigenvalue of Re(B^dag rho B) in the magic basis, where
// maximally entangled states are exactly the real unit vectors. Closed-form
// oracle, independent of the iterative maximizer.
inline double two_qubit_fef_oracle(const Matrix& rho) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Matrix basis = Matrix::Zero(4, 4);
  basis.col(0) << s, 0, 0, s;
  basis.col(1) << i * s, 0, 0, -i * s;
  basis.col(2) << 0, i * s, i * s, 0;
  basis.col(3) << 0, s, -s, 0;
  const Matrix magic = basis.adjoint() * rho * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(magic.real(),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace entwit::test
