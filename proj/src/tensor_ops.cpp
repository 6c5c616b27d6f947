#include "entwit/tensor_ops.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <stdexcept>

namespace entwit {

namespace {

// Index bookkeeping for a split of the particle set. Side B is the given
// subset, side A the rest (both in ascending particle order). Any flat
// index x decomposes as base_a[sub_a[x]] + base_b[sub_b[x]].
struct SplitIndex {
  Index dim_a = 1;
  Index dim_b = 1;
  std::vector<Index> sub_a, sub_b;    // per full flat index
  std::vector<Index> base_a, base_b;  // flat offset of each side index

  SplitIndex(const SystemShape& shape, std::span<const int> b_side) {
    const int m = shape.particles();
    std::vector<bool> in_b(m, false);
    for (int p : b_side) in_b[static_cast<size_t>(p)] = true;
    std::vector<int> a_parts, b_parts;
    for (int p = 0; p < m; ++p) (in_b[p] ? b_parts : a_parts).push_back(p);
    for (int p : a_parts) dim_a *= shape.dim(p);
    for (int p : b_parts) dim_b *= shape.dim(p);

    const Index d = shape.total_dim();
    sub_a.assign(d, 0);
    sub_b.assign(d, 0);
    for (Index x = 0; x < d; ++x) {
      Index a = 0, b = 0;
      for (int p : a_parts) a = a * shape.dim(p) + (x / shape.stride(p)) % shape.dim(p);
      for (int p : b_parts) b = b * shape.dim(p) + (x / shape.stride(p)) % shape.dim(p);
      sub_a[x] = a;
      sub_b[x] = b;
    }
    base_a.assign(dim_a, 0);
    base_b.assign(dim_b, 0);
    for (Index x = 0; x < d; ++x) {
      if (sub_b[x] == 0) base_a[sub_a[x]] = x;
    }
    for (Index x = 0; x < d; ++x) {
      if (sub_a[x] == 0) base_b[sub_b[x]] = x;
    }
  }
};

void check_part(const SystemShape& shape, const Bipartition& part, const char* op) {
  if (part.particle_count() != shape.particles()) {
    throw std::invalid_argument(std::string(op) + ": bipartition does not match shape " +
                                shape.to_string());
  }
}

}  // namespace

Matrix kron(const std::vector<Matrix>& factors) {
  if (factors.empty()) {
    throw std::invalid_argument("kron: empty factor list");
  }
  for (const Matrix& f : factors) {
    if (f.rows() == 0 || f.rows() != f.cols()) {
      throw std::invalid_argument("kron: factors must be square and nonempty");
    }
  }
  Matrix out = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) {
    out = Eigen::kroneckerProduct(out, factors[k]).eval();
  }
  return out;
}

Matrix partial_transpose(const Matrix& mat, const SystemShape& shape,
                         const Bipartition& part) {
  check_part(shape, part, "partial_transpose");
  const Index d = shape.total_dim();
  if (mat.rows() != d || mat.cols() != d) {
    throw std::invalid_argument("partial_transpose: matrix size does not match shape");
  }
  const SplitIndex split(shape, part.b_side());
  Matrix out(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      const Index rr = split.base_a[split.sub_a[r]] + split.base_b[split.sub_b[c]];
      const Index cc = split.base_a[split.sub_a[c]] + split.base_b[split.sub_b[r]];
      out(r, c) = mat(rr, cc);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  return partial_transpose(rho.matrix(), rho.shape(), part);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& traced,
                            double tol) {
  const SystemShape& shape = rho.shape();
  const int m = shape.particles();
  std::vector<int> sorted = traced;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int p : sorted) {
    if (p < 0 || p >= m) {
      throw std::invalid_argument("partial_trace: particle index out of range");
    }
  }
  if (static_cast<int>(sorted.size()) == m) {
    throw std::invalid_argument("partial_trace: cannot trace out every particle");
  }
  if (sorted.empty()) {
    return rho;
  }

  // Side B of the split is the traced subsystem.
  const SplitIndex split(shape, sorted);
  Matrix out = Matrix::Zero(split.dim_a, split.dim_a);
  for (Index ra = 0; ra < split.dim_a; ++ra) {
    for (Index ca = 0; ca < split.dim_a; ++ca) {
      Complex sum = 0.0;
      for (Index t = 0; t < split.dim_b; ++t) {
        sum += rho.matrix()(split.base_a[ra] + split.base_b[t],
                            split.base_a[ca] + split.base_b[t]);
      }
      out(ra, ca) = sum;
    }
  }

  std::vector<int> kept;
  for (int p = 0; p < m; ++p) {
    if (!std::binary_search(sorted.begin(), sorted.end(), p)) kept.push_back(p);
  }
  return DensityMatrix(side_shape(shape, kept), std::move(out), tol);
}

HermitianSpectrum hermitian_eigenvalues(const Matrix& mat, double tol) {
  if (mat.rows() != mat.cols() || mat.rows() == 0) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  }
  const double dev = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw std::invalid_argument("hermitian_eigenvalues: non-Hermitian beyond tolerance (" +
                                std::to_string(dev) + ")");
  }
  const Matrix sym = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  HermitianSpectrum spectrum;
  spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
  return spectrum;
}

Matrix matricize(const PureState& psi, const Bipartition& part) {
  const SystemShape& shape = psi.shape();
  check_part(shape, part, "matricize");
  const SplitIndex split(shape, part.b_side());
  Matrix out(split.dim_a, split.dim_b);
  for (Index x = 0; x < shape.total_dim(); ++x) {
    out(split.sub_a[x], split.sub_b[x]) = psi.amplitudes()(x);
  }
  return out;
}

SystemShape side_shape(const SystemShape& shape, std::span<const int> particles) {
  std::vector<int> dims;
  dims.reserve(particles.size());
  for (int p : particles) dims.push_back(shape.dim(p));
  return SystemShape(std::move(dims));
}

Matrix tensor_across(const SystemShape& shape, const Bipartition& part,
                     const Matrix& op_a, const Matrix& op_b) {
  check_part(shape, part, "tensor_across");
  const SplitIndex split(shape, part.b_side());
  if (op_a.rows() != split.dim_a || op_a.cols() != split.dim_a ||
      op_b.rows() != split.dim_b || op_b.cols() != split.dim_b) {
    throw std::invalid_argument("tensor_across: factor sizes do not match the split");
  }
  const Index d = shape.total_dim();
  Matrix out(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      out(r, c) = op_a(split.sub_a[r], split.sub_a[c]) * op_b(split.sub_b[r], split.sub_b[c]);
    }
  }
  return out;
}

Vector tensor_across(const SystemShape& shape, const Bipartition& part,
                     const Vector& vec_a, const Vector& vec_b) {
  check_part(shape, part, "tensor_across");
  const SplitIndex split(shape, part.b_side());
  if (vec_a.size() != split.dim_a || vec_b.size() != split.dim_b) {
    throw std::invalid_argument("tensor_across: factor sizes do not match the split");
  }
  Vector out(shape.total_dim());
  for (Index x = 0; x < shape.total_dim(); ++x) {
    out(x) = vec_a(split.sub_a[x]) * vec_b(split.sub_b[x]);
  }
  return out;
}

}  // namespace entwit
