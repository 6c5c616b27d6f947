#pragma once

#include "entwit/types.hpp"

#include <span>
#include <vector>

namespace entwit {

/// Kronecker product of square factors, leftmost factor most significant.
Matrix kron(const std::vector<Matrix>& factors);

/// rho^{T_B}: transposes the matrix indices of the particles in
/// part.b_side(). Preserves Hermiticity and trace bit-exactly; the result
/// need not be positive, so it is returned as a raw matrix.
Matrix partial_transpose(const DensityMatrix& rho, const Bipartition& part);
Matrix partial_transpose(const Matrix& mat, const SystemShape& shape,
                         const Bipartition& part);

/// Reduced state on the particles not in `traced`. An empty `traced` set
/// returns the input unchanged; tracing out every particle is an error.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& traced,
                            double tol = kValidationTol);

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// before decomposition; deviations from Hermiticity beyond `tol` are
/// rejected.
HermitianSpectrum hermitian_eigenvalues(const Matrix& mat, double tol = kValidationTol);

/// Reshapes |psi> into its d_A x d_B coefficient matrix for the split:
/// rows indexed by the particles outside part.b_side() (ascending order),
/// columns by part.b_side(). Singular values of the result are the Schmidt
/// coefficients of the split.
Matrix matricize(const PureState& psi, const Bipartition& part);

/// Sub-shape made of the listed particles (ascending order).
SystemShape side_shape(const SystemShape& shape, std::span<const int> particles);

/// Embeds op_a (acting on the particles outside part.b_side()) and op_b
/// (acting on part.b_side()) into the full space with the correct particle
/// interleaving.
Matrix tensor_across(const SystemShape& shape, const Bipartition& part,
                     const Matrix& op_a, const Matrix& op_b);
Vector tensor_across(const SystemShape& shape, const Bipartition& part,
                     const Vector& vec_a, const Vector& vec_b);

}  // namespace entwit
