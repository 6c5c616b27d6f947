#include "entwit/statezoo.hpp"

#include "entwit/criteria.hpp"
#include "entwit/tensor_ops.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace entwit {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

Vector gaussian_vector(Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(size);
  for (Index i = 0; i < size; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

std::vector<double> dirichlet_uniform(int count, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(count);
  double total = 0.0;
  for (double& w : weights) {
    w = expo(rng);
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

Matrix random_density_matrix(const SystemShape& shape, int rank, std::mt19937_64& rng) {
  const std::vector<double> weights = dirichlet_uniform(rank, rng);
  Matrix rho = Matrix::Zero(shape.total_dim(), shape.total_dim());
  for (int k = 0; k < rank; ++k) {
    Vector v = gaussian_vector(shape.total_dim(), rng);
    v.normalize();
    rho += weights[k] * (v * v.adjoint());
  }
  return rho;
}

// Clamp negative eigenvalues to zero and renormalize the trace.
Matrix project_psd(const Matrix& mat) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (mat + mat.adjoint()));
  RealVector values = solver.eigenvalues().cwiseMax(0.0);
  Matrix projected =
      solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
  return projected / projected.trace().real();
}

}  // namespace

PureState w_state(int m) {
  if (m < 2) {
    throw std::invalid_argument("w_state: need at least two qubits");
  }
  SystemShape shape(std::vector<int>(m, 2));
  Vector amp = Vector::Zero(shape.total_dim());
  const double weight = 1.0 / std::sqrt(static_cast<double>(m));
  for (int j = 0; j < m; ++j) {
    amp(shape.stride(j)) = weight;
  }
  return PureState(std::move(shape), std::move(amp));
}

DensityMatrix horodecki_p_mixture(double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("horodecki_p_mixture: weight outside [0, 1]");
  }
  const double s = 1.0 / std::sqrt(2.0);
  Vector psi1 = Vector::Zero(4);
  psi1(0) = s;
  psi1(3) = -s;
  Vector psi2 = Vector::Zero(4);
  psi2(0) = 1.0;
  Matrix rho = p * (psi1 * psi1.adjoint()) + (1.0 - p) * (psi2 * psi2.adjoint());
  return DensityMatrix(SystemShape({2, 2}), std::move(rho));
}

DensityMatrix ab_mixture(double a, double b, double p) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::invalid_argument("ab_mixture: amplitudes must be positive");
  }
  if (std::abs(a * a + b * b - 1.0) > 1e-9) {
    throw std::invalid_argument("ab_mixture: a^2 + b^2 must equal 1");
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("ab_mixture: weight outside [0, 1]");
  }
  Vector psi1 = Vector::Zero(4);
  psi1(0) = a;
  psi1(3) = b;
  Vector psi2 = Vector::Zero(4);
  psi2(1) = a;
  psi2(2) = b;
  Matrix rho = p * (psi1 * psi1.adjoint()) + (1.0 - p) * (psi2 * psi2.adjoint());
  return DensityMatrix(SystemShape({2, 2}), std::move(rho));
}

DensityMatrix nmr_state(double eps, int n_dim, int m) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("nmr_state: mixing weight outside [0, 1]");
  }
  if (n_dim < 2 || m < 2) {
    throw std::invalid_argument("nmr_state: need n_dim >= 2 and m >= 2");
  }
  SystemShape shape(std::vector<int>(m, n_dim));
  const Vector mes = canonical_mes(shape).realized.amplitudes();
  const Index d = shape.total_dim();
  Matrix rho = (1.0 - eps) / static_cast<double>(d) * Matrix::Identity(d, d) +
               eps * (mes * mes.adjoint());
  return DensityMatrix(std::move(shape), std::move(rho));
}

PureState random_pure(const SystemShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng = seeded_engine(seed, 0x50555245u);  // "PURE"
  Vector v = gaussian_vector(shape.total_dim(), rng);
  v.normalize();
  return PureState(shape, std::move(v));
}

DensityMatrix random_density(const SystemShape& shape, int rank, std::uint64_t seed) {
  if (rank < 1) {
    throw std::invalid_argument("random_density: rank must be >= 1");
  }
  std::mt19937_64 rng = seeded_engine(seed, 0x44454e53u);  // "DENS"
  return DensityMatrix(shape, random_density_matrix(shape, rank, rng));
}

DensityMatrix SeparableEnsemble::assemble(const SystemShape& shape) const {
  Matrix rho = Matrix::Zero(shape.total_dim(), shape.total_dim());
  for (const SeparableTerm& term : terms) {
    rho += term.weight * tensor_across(shape, part, term.left.matrix(),
                                       term.right.matrix());
  }
  return DensityMatrix(shape, std::move(rho));
}

SeparableEnsemble random_separable_ensemble(const SystemShape& shape,
                                            const Bipartition& part, int terms,
                                            std::uint64_t seed) {
  if (terms < 1) {
    throw std::invalid_argument("random_separable_ensemble: need at least one term");
  }
  std::mt19937_64 rng = seeded_engine(seed, 0x53455041u);  // "SEPA"
  const SystemShape shape_a = side_shape(shape, part.a_side());
  const SystemShape shape_b = side_shape(shape, part.b_side());
  const std::vector<double> weights = dirichlet_uniform(terms, rng);

  SeparableEnsemble ensemble{{}, part};
  ensemble.terms.reserve(terms);
  for (int t = 0; t < terms; ++t) {
    DensityMatrix left(shape_a,
                       random_density_matrix(shape_a, static_cast<int>(shape_a.total_dim()), rng));
    DensityMatrix right(shape_b,
                        random_density_matrix(shape_b, static_cast<int>(shape_b.total_dim()), rng));
    ensemble.terms.push_back(SeparableTerm{weights[t], std::move(left), std::move(right)});
  }
  return ensemble;
}

DensityMatrix random_separable(const SystemShape& shape, const Bipartition& part,
                               int terms, std::uint64_t seed) {
  return random_separable_ensemble(shape, part, terms, seed).assemble(shape);
}

DensityMatrix random_ppt_symmetrized(const SystemShape& shape, const Bipartition& part,
                                     int rank, std::uint64_t seed) {
  if (rank < 1) {
    throw std::invalid_argument("random_ppt_symmetrized: rank must be >= 1");
  }
  std::mt19937_64 rng = seeded_engine(seed, 0x50505453u);  // "PPTS"
  Matrix state = random_density_matrix(shape, rank, rng);

  // Alternating projections onto the partial-transpose-invariant subspace
  // and the normalized PSD cone. A fixed point of both is PPT across part.
  constexpr double kResidualTol = 1e-12;
  constexpr int kMaxRounds = 500;
  for (int round = 0; round < kMaxRounds; ++round) {
    const Matrix transposed = partial_transpose(state, shape, part);
    const double self_min = hermitian_eigenvalues(state).min();
    const double pt_min = hermitian_eigenvalues(transposed).min();
    if (self_min >= -kResidualTol && pt_min >= -kResidualTol) break;
    state = project_psd(0.5 * (state + transposed));
  }
  return DensityMatrix(shape, std::move(state));
}

}  // namespace entwit
