#include "entwit/maximizer.hpp"

#include "entwit/criteria.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace entwit {

namespace {

constexpr int kWindow = 50;            // iterations per convergence window
constexpr double kInitialStep = 0.1;   // line-search starting step
constexpr double kMinStep = 1e-14;     // below this the ascent has stalled

std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

struct RestartOutcome {
  double value = 0.0;
  std::vector<Matrix> unitaries;
  int iterations = 0;
  bool converged = false;
};

// Parameter layout across particles: particle j owns dim_j^2 consecutive
// entries of the concatenated vector.
struct ParameterLayout {
  std::vector<int> offset;
  std::vector<int> count;
  int total = 0;

  explicit ParameterLayout(const SystemShape& shape) {
    for (int j = 0; j < shape.particles(); ++j) {
      const int n = shape.dim(j) * shape.dim(j);
      offset.push_back(total);
      count.push_back(n);
      total += n;
    }
  }

  int particle_of(int parameter) const {
    int j = 0;
    while (j + 1 < static_cast<int>(offset.size()) && parameter >= offset[j + 1]) ++j;
    return j;
  }
};

class AscentProblem {
 public:
  AscentProblem(const DensityMatrix& rho, const ParameterLayout& layout)
      : rho_(rho), layout_(layout), shape_(rho.shape()) {}

  double eval(const std::vector<Matrix>& unitaries) const {
    const Vector mes = mes_vector(shape_, unitaries);
    const double value = mes.dot(rho_.matrix() * mes).real();
    if (!std::isfinite(value)) {
      throw std::runtime_error("maximize: objective is not finite");
    }
    return value;
  }

  std::vector<Matrix> unitaries_from(const RealVector& theta) const {
    std::vector<Matrix> unitaries;
    unitaries.reserve(shape_.particles());
    for (int j = 0; j < shape_.particles(); ++j) {
      unitaries.push_back(unitary_from_parameters(
          theta.segment(layout_.offset[j], layout_.count[j]), shape_.dim(j)));
    }
    return unitaries;
  }

  // Central finite differences; only the perturbed particle's unitary is
  // recomputed per evaluation.
  RealVector gradient(const RealVector& theta, std::vector<Matrix>& unitaries,
                      double step) const {
    RealVector grad(theta.size());
    RealVector probe = theta;
    for (int p = 0; p < static_cast<int>(theta.size()); ++p) {
      const int j = layout_.particle_of(p);
      const Matrix saved = unitaries[j];
      probe(p) = theta(p) + step;
      unitaries[j] = unitary_from_parameters(
          probe.segment(layout_.offset[j], layout_.count[j]), shape_.dim(j));
      const double forward = eval(unitaries);
      probe(p) = theta(p) - step;
      unitaries[j] = unitary_from_parameters(
          probe.segment(layout_.offset[j], layout_.count[j]), shape_.dim(j));
      const double backward = eval(unitaries);
      probe(p) = theta(p);
      unitaries[j] = saved;
      grad(p) = (forward - backward) / (2.0 * step);
    }
    return grad;
  }

  const SystemShape& shape() const { return shape_; }

 private:
  const DensityMatrix& rho_;
  const ParameterLayout& layout_;
  SystemShape shape_;
};

RestartOutcome run_restart(const AscentProblem& problem, const ParameterLayout& layout,
                           const OptimizerConfig& config, int restart) {
  const SystemShape& shape = problem.shape();
  RealVector theta = RealVector::Zero(layout.total);
  if (restart > 0) {
    std::mt19937_64 rng = restart_engine(config.seed, restart);
    for (int j = 0; j < shape.particles(); ++j) {
      const Matrix start = random_unitary(shape.dim(j), rng);
      theta.segment(layout.offset[j], layout.count[j]) = parameters_from_unitary(start);
    }
  }

  std::vector<Matrix> unitaries = problem.unitaries_from(theta);
  double value = problem.eval(unitaries);
  std::vector<double> history{value};

  RestartOutcome outcome;
  outcome.converged = false;
  int iterations = 0;
  while (iterations < config.max_iterations) {
    ++iterations;
    const RealVector grad = problem.gradient(theta, unitaries, config.fd_step);

    double step = kInitialStep;
    bool accepted = false;
    RealVector trial;
    std::vector<Matrix> trial_unitaries;
    double trial_value = 0.0;
    while (step >= kMinStep) {
      trial = theta + step * grad;
      trial_unitaries = problem.unitaries_from(trial);
      trial_value = problem.eval(trial_unitaries);
      if (trial_value > value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      outcome.converged = true;  // no ascent direction left
      break;
    }
    theta.swap(trial);
    unitaries.swap(trial_unitaries);
    value = trial_value;
    history.push_back(value);

    const int n = static_cast<int>(history.size());
    if (n > kWindow && value - history[n - 1 - kWindow] < config.convergence_tol) {
      outcome.converged = true;
      break;
    }
  }

  outcome.value = value;
  outcome.unitaries = std::move(unitaries);
  outcome.iterations = iterations;
  return outcome;
}

}  // namespace

int MaximizationResult::converged_count() const {
  int count = 0;
  for (bool flag : converged) count += flag ? 1 : 0;
  return count;
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 2) {
    throw std::invalid_argument("random_unitary: dimension must be >= 2");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix ginibre(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      ginibre(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ();
  // Fix the phases of R's diagonal to make the distribution Haar.
  for (Index c = 0; c < dim; ++c) {
    const Complex r = qr.matrixQR()(c, c);
    q.col(c) *= std::abs(r) == 0.0 ? 1.0 : r / std::abs(r);
  }
  return q;
}

Matrix unitary_from_parameters(const RealVector& theta, int dim) {
  if (theta.size() != static_cast<Index>(dim) * dim) {
    throw std::invalid_argument("unitary_from_parameters: need dim^2 parameters");
  }
  Matrix h(dim, dim);
  int k = dim;
  const int off_diagonal = dim * (dim - 1) / 2;
  for (int i = 0; i < dim; ++i) h(i, i) = theta(i);
  int pair = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double re = theta(k + pair);
      const double im = theta(k + off_diagonal + pair);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
      ++pair;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Vector phases(dim);
  for (int i = 0; i < dim; ++i) {
    phases(i) = std::polar(1.0, solver.eigenvalues()(i));
  }
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

RealVector parameters_from_unitary(const Matrix& u) {
  const int dim = static_cast<int>(u.rows());
  if (dim < 1 || u.cols() != dim) {
    throw std::invalid_argument("parameters_from_unitary: matrix must be square");
  }
  // A unitary is normal, so its Schur form is diagonal; the eigenphases and
  // Schur basis give the Hermitian generator directly.
  Eigen::ComplexSchur<Matrix> schur(u);
  RealVector phases(dim);
  for (int i = 0; i < dim; ++i) {
    phases(i) = std::arg(schur.matrixT()(i, i));
  }
  Matrix h = schur.matrixU() * phases.cast<Complex>().asDiagonal() *
             schur.matrixU().adjoint();
  h = 0.5 * (h + h.adjoint()).eval();

  RealVector theta(static_cast<Index>(dim) * dim);
  for (int i = 0; i < dim; ++i) theta(i) = h(i, i).real();
  const int off_diagonal = dim * (dim - 1) / 2;
  int pair = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      theta(dim + pair) = h(i, j).real();
      theta(dim + off_diagonal + pair) = h(i, j).imag();
      ++pair;
    }
  }
  return theta;
}

double objective(const DensityMatrix& rho, const std::vector<Matrix>& unitaries) {
  const Vector mes = mes_vector(rho.shape(), unitaries);
  const double value = mes.dot(rho.matrix() * mes).real();
  if (!std::isfinite(value)) {
    throw std::runtime_error("objective: value is not finite");
  }
  return value;
}

MaximizationResult maximize(const DensityMatrix& rho, const OptimizerConfig& config) {
  const SystemShape& shape = rho.shape();
  int parameter_total = 0;
  for (int j = 0; j < shape.particles(); ++j) {
    parameter_total += shape.dim(j) * shape.dim(j);
  }
  if (shape.particles() > 8 || parameter_total > 128) {
    throw std::invalid_argument(
        "maximize: parameter budget exceeded (m <= 8 particles, sum dim^2 <= 128)");
  }
  if (config.restarts < 1 || config.max_iterations < 1 || config.fd_step <= 0.0 ||
      config.convergence_tol <= 0.0) {
    throw std::invalid_argument("maximize: invalid optimizer configuration");
  }

  const ParameterLayout layout(shape);
  const AscentProblem problem(rho, layout);

  std::vector<RestartOutcome> outcomes(config.restarts);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= config.restarts) break;
      try {
        outcomes[r] = run_restart(problem, layout, config, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        break;
      }
    }
  };

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  MaximizationResult result;
  int best_index = 0;
  for (int r = 0; r < config.restarts; ++r) {
    result.per_restart_values.push_back(outcomes[r].value);
    result.iterations_used.push_back(outcomes[r].iterations);
    result.converged.push_back(outcomes[r].converged);
    if (outcomes[r].value > outcomes[best_index].value) best_index = r;
  }
  result.best_value = outcomes[best_index].value;
  result.best_unitaries = std::move(outcomes[best_index].unitaries);
  return result;
}

double exhaustive_search_oracle(const DensityMatrix& rho, int samples,
                                std::uint64_t seed) {
  if (samples < 1) {
    throw std::invalid_argument("exhaustive_search_oracle: need at least one sample");
  }
  const SystemShape& shape = rho.shape();
  std::mt19937_64 rng = restart_engine(seed, -1);
  double best = 0.0;
  std::vector<Matrix> unitaries(shape.particles());
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < shape.particles(); ++j) {
      unitaries[j] = random_unitary(shape.dim(j), rng);
    }
    best = std::max(best, objective(rho, unitaries));
  }
  return best;
}

}  // namespace entwit
