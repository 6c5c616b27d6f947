#pragma once

#include "entwit/types.hpp"

#include <cstdint>
#include <vector>

namespace entwit {

/// m-qubit W state: equal superposition of the single-excitation basis
/// states, amplitude 1/sqrt(m) each.
PureState w_state(int m);

/// Two-qubit mixture p |psi1><psi1| + (1-p) |00><00| with
/// psi1 = (|00> - |11>)/sqrt(2).
DensityMatrix horodecki_p_mixture(double p);

/// Two-qubit mixture p |psi1><psi1| + (1-p) |psi2><psi2| with
/// psi1 = a|00> + b|11> and psi2 = a|01> + b|10|; a, b > 0, a^2 + b^2 = 1.
DensityMatrix ab_mixture(double a, double b, double p);

/// Pseudo-pure state (1-eps) I / n_dim^m + eps |MES><MES| on m particles of
/// dimension n_dim, with the canonical MES.
DensityMatrix nmr_state(double eps, int n_dim, int m);

/// Normalized complex Gaussian amplitude vector.
PureState random_pure(const SystemShape& shape, std::uint64_t seed);

/// Mixture of `rank` random pure projectors with Dirichlet-uniform weights.
DensityMatrix random_density(const SystemShape& shape, int rank, std::uint64_t seed);

struct SeparableTerm {
  double weight = 0.0;
  DensityMatrix left;   // on the particles outside part.b_side()
  DensityMatrix right;  // on part.b_side()
};

/// Explicit convex mixture of product states across one split.
struct SeparableEnsemble {
  std::vector<SeparableTerm> terms;
  Bipartition part;

  DensityMatrix assemble(const SystemShape& shape) const;
};

/// `terms` random product terms with Dirichlet-uniform weights; each factor
/// is a full-rank random density on its side of the split.
SeparableEnsemble random_separable_ensemble(const SystemShape& shape,
                                            const Bipartition& part, int terms,
                                            std::uint64_t seed);

/// Assembled random separable state (convex mixture of products across
/// `part`), guaranteed PPT across that split.
DensityMatrix random_separable(const SystemShape& shape, const Bipartition& part,
                               int terms, std::uint64_t seed);

/// Random state that is exactly PPT across `part`: a random density is
/// alternately averaged with its partial transpose and projected back onto
/// the PSD cone until both the state and its partial transpose are positive
/// to 1e-12.
DensityMatrix random_ppt_symmetrized(const SystemShape& shape, const Bipartition& part,
                                     int rank, std::uint64_t seed);

}  // namespace entwit
