#pragma once

#include "entwit/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace entwit {

/// Settings for the MES-overlap maximizer. Defaults favour reliability at
/// desk scale; property suites use lighter budgets.
struct OptimizerConfig {
  int restarts = 32;            // restart 0 always starts from identities
  int max_iterations = 5000;    // ascent iterations per restart
  double convergence_tol = 1e-10;  // objective gain over a 50-iteration window
  double fd_step = 1e-5;        // central finite-difference step
  std::uint64_t seed = 42;
  int threads = 0;              // 0 = hardware concurrency
};

struct MaximizationResult {
  double best_value = 0.0;
  std::vector<Matrix> best_unitaries;
  std::vector<double> per_restart_values;
  std::vector<int> iterations_used;
  std::vector<bool> converged;

  int converged_count() const;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal phases of R fixed.
Matrix random_unitary(int dim, std::mt19937_64& rng);

/// exp(i H(theta)) for the Hermitian matrix assembled from dim^2 real
/// parameters: dim diagonal entries, then the dim(dim-1)/2 real parts of
/// the upper triangle (row-major), then the matching imaginary parts.
/// Exactly unitary up to rounding for any theta.
Matrix unitary_from_parameters(const RealVector& theta, int dim);

/// Inverse chart: parameters whose exponential reproduces the given
/// unitary to machine precision (eigenphases taken in (-pi, pi]).
RealVector parameters_from_unitary(const Matrix& u);

/// <MES(U_1..U_m)| rho |MES(U_1..U_m)> with the MES assembled factor-wise;
/// the full product operator is never formed.
double objective(const DensityMatrix& rho, const std::vector<Matrix>& unitaries);

/// Maximizes the MES overlap over products of local unitaries: multi-start
/// finite-difference gradient ascent with a backtracking line search.
/// Restart 0 starts from identity unitaries, the rest from Haar-random
/// ones; per-restart random streams are derived from (seed, restart), so
/// results are deterministic and independent of thread count.
MaximizationResult maximize(const DensityMatrix& rho, const OptimizerConfig& config = {});

/// Best objective over `samples` independent Haar-random unitary tuples: a
/// blind lower bound on the maximum, kept as a cross-check for maximize.
double exhaustive_search_oracle(const DensityMatrix& rho, int samples,
                                std::uint64_t seed);

}  // namespace entwit
