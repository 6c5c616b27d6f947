#include "entwit/criteria.hpp"

#include "entwit/tensor_ops.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entwit {

namespace {

void check_unitary(const Matrix& u, int dim, double tol, const char* op) {
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument(std::string(op) + ": unitary has wrong dimension");
  }
  const double dev = (u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw std::invalid_argument(std::string(op) + ": matrix is not unitary (deviation " +
                                std::to_string(dev) + ")");
  }
}

// Unitary whose first column equals the given unit vector.
Matrix unitary_with_first_column(const Vector& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ();
  const Complex r = qr.matrixQR()(0, 0);
  if (std::abs(r) == 0.0) {
    throw std::invalid_argument("unitary_with_first_column: zero vector");
  }
  q.col(0) *= r / std::abs(r);
  return q;
}

}  // namespace

Vector mes_vector(const SystemShape& shape, const std::vector<Matrix>& unitaries) {
  const int m = shape.particles();
  if (static_cast<int>(unitaries.size()) != m) {
    throw std::invalid_argument("mes_vector: need one unitary per particle");
  }
  for (int j = 0; j < m; ++j) {
    if (unitaries[j].rows() != shape.dim(j) || unitaries[j].cols() != shape.dim(j)) {
      throw std::invalid_argument("mes_vector: unitary dimension mismatch at particle " +
                                  std::to_string(j));
    }
  }
  const int n = shape.min_dim();
  const double weight = 1.0 / std::sqrt(static_cast<double>(n));
  Vector out = Vector::Zero(shape.total_dim());
  Vector term, next;
  for (int i = 0; i < n; ++i) {
    term = unitaries[0].col(i);
    for (int j = 1; j < m; ++j) {
      const auto col = unitaries[j].col(i);
      const Index dj = shape.dim(j);
      next.resize(term.size() * dj);
      for (Index a = 0; a < term.size(); ++a) {
        for (Index b = 0; b < dj; ++b) {
          next(a * dj + b) = term(a) * col(b);
        }
      }
      term.swap(next);
    }
    out += weight * term;
  }
  return out;
}

MesState canonical_mes(const SystemShape& shape) {
  const int n = shape.min_dim();
  Vector amp = Vector::Zero(shape.total_dim());
  const double weight = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    Index index = 0;
    for (int j = 0; j < shape.particles(); ++j) index += shape.stride(j) * i;
    amp(index) = weight;
  }
  std::vector<Matrix> identities;
  identities.reserve(shape.particles());
  for (int j = 0; j < shape.particles(); ++j) {
    identities.push_back(Matrix::Identity(shape.dim(j), shape.dim(j)));
  }
  return MesState{shape, std::move(identities), PureState(shape, std::move(amp))};
}

MesState mes_from_unitaries(const SystemShape& shape, std::vector<Matrix> unitaries) {
  if (static_cast<int>(unitaries.size()) != shape.particles()) {
    throw std::invalid_argument("mes_from_unitaries: need one unitary per particle");
  }
  for (int j = 0; j < shape.particles(); ++j) {
    check_unitary(unitaries[j], shape.dim(j), kValidationTol, "mes_from_unitaries");
  }
  PureState realized(shape, mes_vector(shape, unitaries));
  return MesState{shape, std::move(unitaries), std::move(realized)};
}

Matrix flip_operator(int n) {
  if (n < 2) {
    throw std::invalid_argument("flip_operator: dimension must be >= 2");
  }
  Matrix v = Matrix::Zero(static_cast<Index>(n) * n, static_cast<Index>(n) * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      v(b * n + a, a * n + b) = 1.0;
    }
  }
  return v;
}

Matrix embedded_flip(const SystemShape& shape, const Bipartition& part) {
  if (part.particle_count() != shape.particles()) {
    throw std::invalid_argument("embedded_flip: bipartition does not match shape");
  }
  const int n = shape.min_dim();
  const Index d = shape.total_dim();
  const std::vector<int> a_side = part.a_side();
  const std::vector<int>& b_side = part.b_side();
  auto flat_with = [&shape](const std::vector<int>& side_a, int pa,
                            const std::vector<int>& side_b, int pb) {
    Index index = 0;
    for (int p : side_a) index += shape.stride(p) * pa;
    for (int p : side_b) index += shape.stride(p) * pb;
    return index;
  };

  Matrix v = Matrix::Zero(d, d);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      v(flat_with(a_side, p, b_side, q), flat_with(a_side, q, b_side, p)) = 1.0;
    }
  }
  return v;
}

double overlap(const DensityMatrix& rho, const PureState& psi) {
  if (!(rho.shape() == psi.shape())) {
    throw std::invalid_argument("overlap: state shapes differ");
  }
  const Vector& v = psi.amplitudes();
  const Complex value = v.dot(rho.matrix() * v);
  if (std::abs(value.imag()) > 1e-9) {
    throw std::runtime_error("overlap: imaginary part " + std::to_string(value.imag()) +
                             " exceeds tolerance");
  }
  return std::clamp(value.real(), 0.0, 1.0);
}

PptCheck is_ppt(const DensityMatrix& rho, const Bipartition& part, double tol) {
  if (tol <= 0) {
    throw std::invalid_argument("is_ppt: tolerance must be positive");
  }
  const Matrix transposed = partial_transpose(rho, part);
  const HermitianSpectrum spectrum = hermitian_eigenvalues(transposed);
  const double min_eig = spectrum.min();
  return PptCheck{min_eig >= -tol, min_eig};
}

NptSurvey npt_survey(const DensityMatrix& rho, double tol) {
  const int m = rho.shape().particles();
  if (m < 2 || m > 12) {
    throw std::invalid_argument("npt_survey: particle count " + std::to_string(m) +
                                " outside the supported range [2, 12]");
  }
  NptSurvey survey;
  survey.all_npt = true;
  for (const Bipartition& part : Bipartition::enumerate(m)) {
    const PptCheck check = is_ppt(rho, part, tol);
    survey.splits.push_back(BipartitionPpt{part, check.min_eigenvalue, !check.is_ppt});
    survey.all_npt = survey.all_npt && !check.is_ppt;
  }
  return survey;
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::kNptEntangled ? "NPT_ENTANGLED" : "INCONCLUSIVE";
}

MesCriterionResult mes_criterion(const SystemShape& shape, double best_overlap,
                                 double margin) {
  // Valid density matrices carry 1e-9 trace/positivity tolerances, so the
  // maximized objective may poke past [0, 1] by that much.
  if (best_overlap < -1e-6 || best_overlap > 1.0 + 1e-6) {
    throw std::invalid_argument("mes_criterion: overlap outside [0, 1]");
  }
  MesCriterionResult result;
  result.best_overlap = std::clamp(best_overlap, 0.0, 1.0);
  result.threshold = 1.0 / shape.min_dim();
  result.margin = margin;
  result.verdict = best_overlap > result.threshold + margin ? Verdict::kNptEntangled
                                                            : Verdict::kInconclusive;
  return result;
}

std::pair<double, bool> pure_diagonal_sum_check(const PureState& psi) {
  const SystemShape& shape = psi.shape();
  Complex sum = 0.0;
  for (int i = 0; i < shape.min_dim(); ++i) {
    Index index = 0;
    for (int j = 0; j < shape.particles(); ++j) index += shape.stride(j) * i;
    sum += psi.amplitudes()(index);
  }
  const double magnitude = std::abs(sum);
  return {magnitude, magnitude > 1.0};
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, const Bipartition& part,
                                       double tol) {
  const Matrix coeff = matricize(psi, part);
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomposition result;
  result.coefficients = svd.singularValues();
  result.left_basis = svd.matrixU();
  // matricize(psi)[a,b] = sum_i k_i U(a,i) conj(V(b,i)), so the right-side
  // Schmidt vectors are the conjugated columns of V.
  result.right_basis = svd.matrixV().conjugate();
  result.schmidt_number = 0;
  for (Index i = 0; i < result.coefficients.size(); ++i) {
    if (result.coefficients(i) > tol) ++result.schmidt_number;
  }
  return result;
}

double bipartite_pure_max_overlap(const PureState& psi, const Bipartition& part) {
  const SchmidtDecomposition sd = schmidt_decompose(psi, part);
  const double n = static_cast<double>(
      std::min(sd.left_basis.rows(), sd.right_basis.rows()));
  const double total = sd.coefficients.sum();
  return total * total / n;
}

int schmidt_bound_from_fidelity(double fidelity, int n_dim) {
  if (fidelity < -1e-12 || fidelity > 1.0 + 1e-12) {
    throw std::invalid_argument("schmidt_bound_from_fidelity: fidelity outside [0, 1]");
  }
  if (n_dim < 2) {
    throw std::invalid_argument("schmidt_bound_from_fidelity: dimension must be >= 2");
  }
  int largest = 0;
  for (int p = 1; p <= n_dim; ++p) {
    if (fidelity > static_cast<double>(p) / n_dim) largest = p;
  }
  return largest + 1;
}

PuritySurvey purity_entanglement_check(const PureState& psi, double tol) {
  const int m = psi.shape().particles();
  if (m < 2 || m > 12) {
    throw std::invalid_argument("purity_entanglement_check: particle count " +
                                std::to_string(m) + " outside the supported range [2, 12]");
  }
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  PuritySurvey survey;
  survey.entangled = true;
  for (const Bipartition& part : Bipartition::enumerate(m)) {
    const DensityMatrix reduced = partial_trace(rho, part.b_side());
    const double purity = (reduced.matrix() * reduced.matrix()).trace().real();
    const double mixedness = 1.0 - purity;
    survey.mixedness.emplace_back(part, mixedness);
    survey.entangled = survey.entangled && mixedness > tol;
  }
  return survey;
}

double nmr_fidelity(double eps, int n_dim, int m) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("nmr_fidelity: mixing weight outside [0, 1]");
  }
  if (n_dim < 2 || m < 2) {
    throw std::invalid_argument("nmr_fidelity: need n_dim >= 2 and m >= 2");
  }
  return (1.0 - eps) / std::pow(static_cast<double>(n_dim), m) + eps;
}

double nmr_threshold(int n_dim) {
  if (n_dim < 2) {
    throw std::invalid_argument("nmr_threshold: dimension must be >= 2");
  }
  return 1.0 / (n_dim + 1.0);
}

MesState schmidt_aligned_mes(const PureState& single, const PureState& pair) {
  if (single.shape().particles() != 1 || pair.shape().particles() != 2) {
    throw std::invalid_argument("schmidt_aligned_mes: expects a 1-particle and a 2-particle state");
  }
  const int n = single.shape().dim(0);
  if (pair.shape().dim(0) != n || pair.shape().dim(1) != n) {
    throw std::invalid_argument("schmidt_aligned_mes: all particles must share one dimension");
  }
  const SchmidtDecomposition sd =
      schmidt_decompose(pair, Bipartition({1}, 2));

  // Basis for the first particle in which its amplitudes are exactly the
  // Schmidt coefficients of the pair: W maps the coefficient vector onto
  // the single-particle state, so <W e_i | single> = k_i.
  Vector k_vec = sd.coefficients.cast<Complex>();
  const Matrix from_coeffs = unitary_with_first_column(k_vec.normalized());
  // k_vec is already unit norm for a normalized pair state; normalized()
  // only guards against rounding.
  const Matrix from_single = unitary_with_first_column(single.amplitudes());
  const Matrix w = from_single * from_coeffs.adjoint();

  return mes_from_unitaries(SystemShape({n, n, n}),
                            {w, sd.left_basis, sd.right_basis});
}

}  // namespace entwit
