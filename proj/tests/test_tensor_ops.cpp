#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entwit/statezoo.hpp"
#include "entwit/tensor_ops.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <vector>

using namespace entwit;
using entwit::test::max_abs_diff;

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

DensityMatrix mes2_projector() {
  const SystemShape shape({2, 2});
  Vector amp = Vector::Zero(4);
  amp(0) = amp(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::from_pure(PureState(shape, amp));
}

}  // namespace

TEST_CASE("SystemShape validates and indexes row-major") {
  CHECK_THROWS_AS(SystemShape({}), std::invalid_argument);
  CHECK_THROWS_AS(SystemShape({2, 1}), std::invalid_argument);

  const SystemShape shape({2, 3, 2});
  CHECK(shape.total_dim() == 12);
  CHECK(shape.min_dim() == 2);
  const std::vector<int> multi{1, 2, 0};
  CHECK(shape.flatten(multi) == 10);
  CHECK(shape.unflatten(10) == multi);
  for (Index x = 0; x < shape.total_dim(); ++x) {
    const auto digits = shape.unflatten(x);
    CHECK(shape.flatten(digits) == x);
  }
}

TEST_CASE("Bipartition canonical form excludes particle 0") {
  const Bipartition from_zero({0}, 2);
  CHECK(from_zero.b_side() == std::vector<int>{1});
  const Bipartition from_pair({0, 2}, 3);
  CHECK(from_pair.b_side() == std::vector<int>{1});
  CHECK(from_pair.a_side() == std::vector<int>{0, 2});

  CHECK(Bipartition::enumerate(2).size() == 1);
  CHECK(Bipartition::enumerate(3).size() == 3);
  CHECK(Bipartition::enumerate(4).size() == 7);

  CHECK_THROWS_AS(Bipartition({0, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition({}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition({3}, 3), std::invalid_argument);
}

TEST_CASE("PureState and DensityMatrix enforce their invariants") {
  const SystemShape shape({2, 2});
  Vector bad = Vector::Ones(4);
  CHECK_THROWS_AS(PureState(shape, bad), std::invalid_argument);
  CHECK_NOTHROW(PureState(shape, bad / 2.0));
  CHECK_THROWS_AS(PureState(SystemShape({2}), bad / 2.0), std::invalid_argument);

  Matrix not_hermitian = Matrix::Zero(4, 4);
  not_hermitian(0, 1) = 1.0;
  not_hermitian(0, 0) = 1.0;
  CHECK_THROWS_AS(DensityMatrix(shape, not_hermitian), std::invalid_argument);

  Matrix wrong_trace = 0.9 * Matrix::Identity(4, 4) / 4.0;
  CHECK_THROWS_AS(DensityMatrix(shape, wrong_trace), std::invalid_argument);

  Matrix not_psd = Matrix::Zero(4, 4);
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(shape, not_psd), std::invalid_argument);

  // near-Hermitian inputs are symmetrized, not rejected
  Matrix nearly = Matrix::Identity(4, 4) / 4.0;
  nearly(0, 1) = Complex(0.0, 1e-11);
  const DensityMatrix fixed(shape, nearly);
  CHECK(max_abs_diff(fixed.matrix(), fixed.matrix().adjoint()) == 0.0);
}

TEST_CASE("kron basics") {
  CHECK(max_abs_diff(kron({identity(2), identity(2)}), identity(4)) == 0.0);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(max_abs_diff(kron({p0, p1}), expected) == 0.0);

  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  Matrix anti = Matrix::Zero(4, 4);
  anti(0, 3) = anti(1, 2) = anti(2, 1) = anti(3, 0) = 1.0;
  CHECK(max_abs_diff(kron({swap, swap}), anti) == 0.0);

  CHECK_THROWS_AS(kron({}), std::invalid_argument);
  CHECK_THROWS_AS(kron({Matrix::Zero(2, 3)}), std::invalid_argument);
}

TEST_CASE("partial transpose of the maximally mixed state is itself") {
  const SystemShape shape({2, 2});
  const DensityMatrix iso(shape, Matrix::Identity(4, 4) / 4.0);
  for (const Bipartition& part : Bipartition::enumerate(2)) {
    CHECK(max_abs_diff(partial_transpose(iso, part), iso.matrix()) == 0.0);
  }
}

TEST_CASE("partial transpose of the 2-qubit MES projector is the scaled flip") {
  const DensityMatrix mes = mes2_projector();
  const Matrix pt = partial_transpose(mes, Bipartition({1}, 2));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;  // diagonal fixed points
  expected(1, 2) = expected(2, 1) = 0.5;  // swapped pair
  CHECK(max_abs_diff(pt, expected) <= 1e-15);
}

TEST_CASE("partial transpose is a bit-exact involution preserving trace and Hermiticity") {
  int seed = 0;
  for (const auto& dims : {std::vector<int>{2, 2}, {2, 3}, {2, 2, 2}, {3, 2, 2}}) {
    const SystemShape shape(dims);
    for (int draw = 0; draw < 8; ++draw) {
      const DensityMatrix rho = random_density(shape, 3, 1000 + seed++);
      for (const Bipartition& part : Bipartition::enumerate(shape.particles())) {
        const Matrix pt = partial_transpose(rho, part);
        CHECK(pt.trace() == rho.matrix().trace());
        CHECK(max_abs_diff(pt, pt.adjoint()) == 0.0);
        const Matrix back = partial_transpose(pt, shape, part);
        CHECK(max_abs_diff(back, rho.matrix()) == 0.0);
      }
    }
  }
}

TEST_CASE("partial trace marginals") {
  const SystemShape shape({2, 2});
  const Bipartition part({1}, 2);

  // product state: tracing one side leaves the other factor
  Matrix rho_a(2, 2), rho_b(2, 2);
  rho_a << 0.7, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.3;
  rho_b << 0.4, Complex(0.0, -0.2), Complex(0.0, 0.2), 0.6;
  const DensityMatrix product(shape, tensor_across(shape, part, rho_a, rho_b));
  CHECK(max_abs_diff(partial_trace(product, {1}).matrix(), rho_a) <= 1e-12);
  CHECK(max_abs_diff(partial_trace(product, {0}).matrix(), rho_b) <= 1e-12);

  // MES marginals are maximally mixed
  const DensityMatrix mes = mes2_projector();
  CHECK(max_abs_diff(partial_trace(mes, {0}).matrix(), Matrix::Identity(2, 2) / 2.0) <= 1e-15);
  CHECK(max_abs_diff(partial_trace(mes, {1}).matrix(), Matrix::Identity(2, 2) / 2.0) <= 1e-15);

  // empty trace returns the input unchanged
  CHECK(max_abs_diff(partial_trace(mes, {}).matrix(), mes.matrix()) == 0.0);

  CHECK_THROWS_AS(partial_trace(mes, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(mes, {2}), std::invalid_argument);
}

TEST_CASE("partial trace composes over disjoint subsets") {
  const SystemShape shape({2, 3, 2});
  for (int draw = 0; draw < 20; ++draw) {
    const DensityMatrix rho = random_density(shape, 4, 2000 + draw);
    const DensityMatrix step = partial_trace(partial_trace(rho, {1}), {1});  // traces particle 2
    const DensityMatrix joint = partial_trace(rho, {1, 2});
    CHECK(max_abs_diff(step.matrix(), joint.matrix()) <= 1e-12);
    CHECK(std::abs(joint.matrix().trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("hermitian_eigenvalues on known spectra") {
  const HermitianSpectrum id = hermitian_eigenvalues(Matrix::Identity(4, 4));
  for (double v : id.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const Matrix pt = partial_transpose(mes2_projector(), Bipartition({1}, 2));
  const HermitianSpectrum flip = hermitian_eigenvalues(pt);
  REQUIRE(flip.eigenvalues.size() == 4);
  CHECK(flip.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(flip.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flip.eigenvalues[3] == doctest::Approx(0.5).epsilon(1e-12));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.1;
  diag(1, 1) = 0.9;
  const HermitianSpectrum d = hermitian_eigenvalues(diag);
  CHECK(d.eigenvalues[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(d.eigenvalues[1] == doctest::Approx(0.9).epsilon(1e-14));

  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigenvalues(skew), std::invalid_argument);
}

TEST_CASE("eigenvalue sums match traces over random densities") {
  const std::vector<std::vector<int>> shapes{{2, 2}, {3, 3}, {2, 2, 2}, {2, 3}, {4, 3}};
  int seed = 0;
  for (int draw = 0; draw < 500; ++draw) {
    const SystemShape shape(shapes[draw % shapes.size()]);
    const DensityMatrix rho = random_density(shape, 1 + draw % 5, 3000 + seed++);
    const HermitianSpectrum spectrum = hermitian_eigenvalues(rho.matrix());
    const double dim = static_cast<double>(shape.total_dim());
    CHECK(std::abs(spectrum.sum() - rho.matrix().trace().real()) <= 1e-7 * dim);
    CHECK(spectrum.min() >= -1e-9);
  }
}

TEST_CASE("matricize on known states") {
  const SystemShape two_qubits({2, 2});
  Vector basis = Vector::Zero(4);
  basis(0) = 1.0;
  Matrix m = matricize(PureState(two_qubits, basis), Bipartition({1}, 2));
  CHECK(m(0, 0) == Complex(1.0, 0.0));
  CHECK(std::abs(m(0, 1)) + std::abs(m(1, 0)) + std::abs(m(1, 1)) == 0.0);

  Vector mes = Vector::Zero(4);
  mes(0) = mes(3) = 1.0 / std::sqrt(2.0);
  m = matricize(PureState(two_qubits, mes), Bipartition({1}, 2));
  CHECK(max_abs_diff(m, Matrix::Identity(2, 2) / std::sqrt(2.0)) <= 1e-15);

  const SystemShape three_qubits({2, 2, 2});
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  m = matricize(PureState(three_qubits, ghz), Bipartition({1, 2}, 3));
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 4);
  CHECK(m(0, 0) == Complex(1.0 / std::sqrt(2.0), 0.0));
  CHECK(m(1, 3) == Complex(1.0 / std::sqrt(2.0), 0.0));
  CHECK(m.cwiseAbs().sum() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("matricize preserves the norm in its singular values") {
  const std::vector<std::vector<int>> shapes{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {2, 3, 2}};
  for (int draw = 0; draw < 40; ++draw) {
    const SystemShape shape(shapes[draw % shapes.size()]);
    const PureState psi = random_pure(shape, 4000 + draw);
    for (const Bipartition& part : Bipartition::enumerate(shape.particles())) {
      const Matrix m = matricize(psi, part);
      Eigen::JacobiSVD<Matrix> svd(m);
      CHECK(svd.singularValues().squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("tensor_across interleaves non-contiguous splits correctly") {
  const SystemShape shape({2, 2, 2});
  const Bipartition part({1}, 3);  // A side = particles {0, 2}
  Matrix op_a = Matrix::Zero(4, 4);
  for (Index k = 0; k < 4; ++k) op_a(k, k) = static_cast<double>(k);
  Matrix op_b = Matrix::Identity(2, 2);
  const Matrix full = tensor_across(shape, part, op_a, op_b);
  // digit of particle 2 is the least significant bit of the A-side index
  const std::vector<int> r101{1, 0, 1};
  const Index x = shape.flatten(r101);
  CHECK(full(x, x) == Complex(3.0, 0.0));
}
