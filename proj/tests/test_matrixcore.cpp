#include <cmath>

#include "doctest.h"
#include "nszcap/matrixcore.hpp"
#include "test_helpers.hpp"

using namespace nszcap;

namespace {
ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}
}  // namespace

TEST_CASE("tensor: identities, basis states and diagonals") {
  CHECK(max_abs_diff(tensor(identity(2), identity(3)), identity(6)) == 0.0);
  const ComplexMatrix e = tensor(ket_bra(2, 0, 0), ket_bra(2, 1, 1));
  CHECK(e(1, 1) == Complex(1.0));
  CHECK(e.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(max_abs_diff(tensor(diag({2, 3}), diag({5, 7})), diag({10, 14, 15, 21})) == 0.0);
}

TEST_CASE("tensor is associative and bilinear") {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = testing::random_matrix(2, 3, rng);
  const ComplexMatrix b = testing::random_matrix(3, 2, rng);
  const ComplexMatrix c = testing::random_matrix(2, 2, rng);
  CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-12);
  const ComplexMatrix a2 = testing::random_matrix(2, 3, rng);
  const Complex s(0.3, -1.2);
  CHECK(max_abs_diff(tensor(a + s * a2, b), tensor(a, b) + s * tensor(a2, b)) < 1e-12);
}

TEST_CASE("partial_trace examples") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = testing::random_density(2, rng);
  const ComplexMatrix sigma = testing::random_density(3, rng);
  CHECK(max_abs_diff(partial_trace(tensor(rho, sigma), 2, 3, Subsystem::kFirst), sigma) < 1e-12);

  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix bell = phi * phi.adjoint();
  CHECK(max_abs_diff(partial_trace(bell, 2, 2, Subsystem::kSecond), 0.5 * identity(2)) < 1e-15);

  const ComplexMatrix delta2 = tensor(ket_bra(2, 0, 0), ket_bra(2, 0, 0)) +
                               tensor(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(max_abs_diff(partial_trace(delta2, 2, 2, Subsystem::kFirst), identity(2)) == 0.0);
}

TEST_CASE("partial_trace of a product and trace preservation") {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = testing::random_matrix(3, 3, rng);
  const ComplexMatrix b = testing::random_matrix(2, 2, rng);
  CHECK(max_abs_diff(partial_trace(tensor(a, b), 3, 2, Subsystem::kFirst), a.trace() * b) < 1e-12);
  CHECK(max_abs_diff(partial_trace(tensor(a, b), 3, 2, Subsystem::kSecond), b.trace() * a) < 1e-12);
  const ComplexMatrix m = testing::random_matrix(6, 6, rng);
  CHECK(std::abs(partial_trace(m, 2, 3, Subsystem::kSecond).trace() - m.trace()) < 1e-12);
}

TEST_CASE("partial_trace rejects dimension mismatch") {
  CHECK_THROWS_AS(partial_trace(identity(5), 2, 3, Subsystem::kFirst), InputError);
}

TEST_CASE("eig_hermitian") {
  const HermitianEigen e = eig_hermitian(diag({3, 1}));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0));

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const HermitianEigen ex = eig_hermitian(x);
  CHECK(ex.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(ex.eigenvalues(1) == doctest::Approx(1.0));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(5, rng);
    const HermitianEigen r = eig_hermitian(h);
    const ComplexMatrix back =
        r.eigenvectors * r.eigenvalues.cast<Complex>().asDiagonal() * r.eigenvectors.adjoint();
    const double norm = r.eigenvalues.cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(back, h) <= 1e-9 * (1.0 + norm));
    CHECK(max_abs_diff(r.eigenvectors.adjoint() * r.eigenvectors, identity(5)) < 1e-12);
  }

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_hermitian(bad), InputError);
}

TEST_CASE("support_projection") {
  CHECK(max_abs_diff(support_projection(diag({1, 0})), diag({1, 0})) < 1e-15);
  CHECK(max_abs_diff(support_projection(diag({5, 1e-15, 0}), 1e-9), diag({1, 0, 0})) < 1e-15);

  ComplexMatrix j = ComplexMatrix::Zero(4, 4);
  j(0, 0) = j(0, 3) = j(3, 0) = j(3, 3) = 1.0;  // Choi matrix of the qubit identity
  const ComplexMatrix p = support_projection(j);
  CHECK(max_abs_diff(p, 0.5 * j) < 1e-12);

  CHECK_THROWS_AS(support_projection(diag({1, -1e-6})), InputError);
}

TEST_CASE("support_projection output is an orthogonal projector") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const ComplexMatrix g = testing::random_matrix(5, 2, rng);
    const ComplexMatrix m = g * g.adjoint();
    const ComplexMatrix p = support_projection(m);
    CHECK(max_abs_diff(p * p, p) < 1e-10);
    CHECK(hermitian_defect(p) < 1e-10);
    CHECK(std::abs(p.trace().real() - 2.0) < 1e-10);
    CHECK(max_abs_diff(p * m, m) < 1e-10);
    // eigenvalues of P^2 and P coincide
    const RealVector e1 = eig_hermitian(p).eigenvalues;
    const RealVector e2 = eig_hermitian(p * p).eigenvalues;
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("generalized_pauli") {
  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK(max_abs_diff(generalized_pauli(2, 0, 0), identity(2)) < 1e-15);
  CHECK(max_abs_diff(generalized_pauli(2, 1, 0), x) < 1e-15);
  CHECK(max_abs_diff(generalized_pauli(2, 0, 1), z) < 1e-15);
  CHECK(max_abs_diff(generalized_pauli(2, 1, 1), x * z) < 1e-15);

  for (int d = 2; d <= 4; ++d) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const ComplexMatrix u = generalized_pauli(d, a, b);
        CHECK(max_abs_diff(u.adjoint() * u, identity(d)) < 1e-12);
      }
    }
  }

  std::mt19937_64 rng(29);
  const ComplexMatrix rho = testing::random_matrix(3, 3, rng);
  ComplexMatrix twirl = ComplexMatrix::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const ComplexMatrix u = generalized_pauli(3, a, b);
      twirl += u * rho * u.adjoint() / 9.0;
    }
  }
  CHECK(max_abs_diff(twirl, rho.trace() * identity(3) / 3.0) < 1e-12);

  CHECK_THROWS_AS(generalized_pauli(2, 2, 0), InputError);
  CHECK_THROWS_AS(generalized_pauli(3, 0, -1), InputError);
}

TEST_CASE("op_norm") {
  CHECK(op_norm(diag({1, 0.5})) == doctest::Approx(1.0));
  CHECK(op_norm(0.5 * identity(4)) == doctest::Approx(0.5));
  CHECK(op_norm(diag({-3, 1})) == doctest::Approx(3.0));
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(op_norm(bad), InputError);
}

TEST_CASE("is_real and hermitian_defect") {
  ComplexMatrix m = identity(3);
  CHECK(is_real(m));
  m(0, 1) = Complex(0, 1e-10);
  CHECK_FALSE(is_real(m));
  CHECK(hermitian_defect(m) == doctest::Approx(1e-10));
  CHECK(std::isinf(hermitian_defect(ComplexMatrix::Zero(2, 3))));
}
