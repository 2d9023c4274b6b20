#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qjunction/error.hpp"
#include "qjunction/operator.hpp"

using namespace qjunction;

namespace {

double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }

Operator op(const ComplexMatrix& m) { return Operator(m); }

}  // namespace

TEST_CASE("backend self-check is clean") {
  // OPENBLAS_CORETYPE is pinned by the test driver; see README
  CHECK(linear_algebra_self_check().empty());
}

TEST_CASE("kron small cases") {
  CHECK(dist(kron(Operator::identity(2), Operator::identity(3)).matrix(), ComplexMatrix::Identity(6, 6)) == 0.0);

  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK(dist(kron(pauli(Pauli::z), Operator::identity(2)).matrix(), expected) == 0.0);
}

TEST_CASE("kron matches the entrywise oracle") {
  oracle::Random rng(11);
  const ComplexMatrix a = rng.matrix(3, 3), b = rng.matrix(4, 4);
  CHECK(dist(kron(op(a), op(b)).matrix(), oracle::kron(a, b)) == 0.0);
}

TEST_CASE("kron mixed product") {
  oracle::Random rng(12);
  const ComplexMatrix a = rng.matrix(2, 2), b = rng.matrix(2, 2);
  const Operator i2 = Operator::identity(2);
  const ComplexMatrix lhs = oracle::multiply(kron(op(a), i2).matrix(), kron(i2, op(b)).matrix());
  CHECK(dist(lhs, kron(op(a), op(b)).matrix()) <= 1e-14);
}

TEST_CASE("kron associativity and trace") {
  oracle::Random rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator a = op(rng.matrix(2, 2)), b = op(rng.matrix(3, 3)), c = op(rng.matrix(2, 2));
    CHECK(dist(kron(kron(a, b), c).matrix(), kron(a, kron(b, c)).matrix()) <= 1e-14);
    CHECK(dist(kron({a, b, c}).matrix(), kron(a, kron(b, c)).matrix()) <= 1e-14);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) <= 1e-12);
  }
}

TEST_CASE("pauli algebra") {
  const Operator x = pauli(Pauli::x), y = pauli(Pauli::y), z = pauli(Pauli::z);
  ComplexMatrix zz = ComplexMatrix::Zero(2, 2);
  zz(0, 0) = 1.0;
  zz(1, 1) = -1.0;
  CHECK(dist(z.matrix(), zz) == 0.0);
  CHECK(dist((x * x).matrix(), ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(dist(commutator(x, y).matrix(), (2.0 * kI * z).matrix()) == 0.0);
  CHECK(dist(pauli(Pauli::identity).matrix(), ComplexMatrix::Identity(2, 2)) == 0.0);
  for (const Operator& p : {x, y, z}) {
    CHECK(p.hermitian());
    CHECK(p.hermiticity_defect() == 0.0);
  }
}

TEST_CASE("ladder operators") {
  ComplexMatrix a2 = ComplexMatrix::Zero(2, 2);
  a2(0, 1) = 1.0;
  CHECK(dist(ladder(2).matrix(), a2) == 0.0);

  const Operator a3 = ladder(3);
  ComplexMatrix n3 = ComplexMatrix::Zero(3, 3);
  n3.diagonal() << 0, 1, 2;
  CHECK(dist((a3.adjoint() * a3).matrix(), n3) <= 1e-15);
  CHECK(dist(number(3).matrix(), n3) <= 1e-15);

  const Operator a6 = ladder(6);
  CHECK((a6 + a6.adjoint()).hermiticity_defect() == 0.0);

  CHECK_THROWS_AS(ladder(1), InvalidTruncation);
  CHECK_THROWS_AS(ladder(0), InvalidTruncation);
}

TEST_CASE("herm_eig on Pauli matrices") {
  const EigenSystem ez = herm_eig(pauli(Pauli::z));
  CHECK(ez.values(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ez.values(1) == doctest::Approx(1.0).epsilon(1e-15));

  const EigenSystem ex = herm_eig(pauli(Pauli::x));
  CHECK(std::abs(ex.values(0) + 1.0) <= 1e-14);
  CHECK(std::abs(ex.values(1) - 1.0) <= 1e-14);
  const double r = std::numbers::sqrt2 / 2.0;
  // phase rule: first component real positive
  CHECK(std::abs(ex.vectors(0, 0) - r) <= 1e-14);
  CHECK(std::abs(ex.vectors(1, 0) + r) <= 1e-14);
  CHECK(std::abs(ex.vectors(0, 1) - r) <= 1e-14);
  CHECK(std::abs(ex.vectors(1, 1) - r) <= 1e-14);
}

TEST_CASE("herm_eig reconstruction at 72x72") {
  oracle::Random rng(21);
  const ComplexMatrix h = rng.hermitian(72);
  const EigenSystem e = herm_eig(Operator(h));
  const ComplexMatrix& v = e.vectors;

  for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) <= e.values(i));
  const ComplexMatrix rebuilt = v * e.values.cast<Complex>().asDiagonal() * v.adjoint();
  CHECK(dist(rebuilt, h) <= 1e-10);
  CHECK(dist(v.adjoint() * v, ComplexMatrix::Identity(72, 72)) <= 1e-12);

  // against Eigen's own solver
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h);
  CHECK((ref.eigenvalues() - e.values).cwiseAbs().maxCoeff() <= 1e-10 * ref.eigenvalues().cwiseAbs().maxCoeff());

  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    Eigen::Index first = 0;
    while (std::abs(v(first, k)) < 1e-10) ++first;
    CHECK(v(first, k).real() > 0.0);
    CHECK(std::abs(v(first, k).imag()) <= 1e-14);
  }

  const RealVector low = herm_eigvals(Operator(h), 5);
  REQUIRE(low.size() == 5);
  CHECK((low - e.values.head(5)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("herm_eig rejects non-Hermitian input with the measured defect") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    herm_eig(Operator(m));
    FAIL("expected HermiticityViolation");
  } catch (const HermiticityViolation& e) {
    CHECK(e.asymmetry() == doctest::Approx(1.0));
  }
}

TEST_CASE("spectrum invariant under unitary similarity") {
  oracle::Random rng(22);
  const Operator h(rng.hermitian(20));
  for (int trial = 0; trial < 3; ++trial) {
    const Operator u = unitary_exp(Operator(rng.anti_hermitian(20)));
    const Operator g = similarity(u, h);
    const RealVector a = herm_eig(h).values;
    const RealVector b = herm_eig(Operator(0.5 * (g.matrix() + g.matrix().adjoint()))).values;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("unitary_exp") {
  CHECK(dist(unitary_exp(Operator::zero(3)).matrix(), ComplexMatrix::Identity(3, 3)) <= 1e-15);

  const Operator k = (kI * (std::numbers::pi / 2.0)) * pauli(Pauli::x);
  CHECK(dist(unitary_exp(k).matrix(), (kI * pauli(Pauli::x)).matrix()) <= 1e-14);

  oracle::Random rng(31);
  const ComplexMatrix a = rng.anti_hermitian(50);
  const ComplexMatrix u = unitary_exp(Operator(a)).matrix();
  const ComplexMatrix w = unitary_exp(Operator(ComplexMatrix(-a))).matrix();
  CHECK(dist(u * w, ComplexMatrix::Identity(50, 50)) <= 1e-12);
  CHECK(dist(u.adjoint() * u, ComplexMatrix::Identity(50, 50)) <= 1e-10);
  // Eigen's Pade route as a second opinion
  CHECK(dist(u, oracle::expm(a)) <= 1e-11);

  CHECK_THROWS_AS(unitary_exp(pauli(Pauli::x)), HermiticityViolation);
}

TEST_CASE("solve_linear") {
  ComplexVector b(3);
  b << Complex(1, 2), Complex(-3, 0), Complex(0, 4);
  CHECK((solve_linear(ComplexMatrix::Identity(3, 3), b) - b).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  ComplexVector rhs(2);
  rhs << 2.0, 8.0;
  const ComplexVector x = solve_linear(d, rhs);
  CHECK(std::abs(x(0) - 1.0) <= 1e-15);
  CHECK(std::abs(x(1) - 2.0) <= 1e-15);

  oracle::Random rng(41);
  const ComplexMatrix a = rng.matrix(200, 200) + 20.0 * ComplexMatrix::Identity(200, 200);
  const ComplexVector rhs2 = rng.matrix(200, 1);
  const ComplexVector x2 = solve_linear(a, rhs2);
  CHECK((a * x2 - rhs2).norm() / rhs2.norm() <= 1e-10);

  RealMatrix ar = RealMatrix::Random(30, 30) + 10.0 * RealMatrix::Identity(30, 30);
  RealVector br = RealVector::Ones(30);
  CHECK((ar * solve_linear(ar, br) - br).norm() <= 1e-10);

  ComplexMatrix singular = ComplexMatrix::Ones(3, 3);
  CHECK_THROWS_AS(solve_linear(singular, ComplexVector::Ones(3)), SingularSystem);
}

TEST_CASE("solve_linear up to condition number 1e8") {
  oracle::Random rng(42);
  const int n = 40;
  // Q diag(sigma) Q^dagger with sigma spanning eight decades
  const ComplexMatrix q = unitary_exp(Operator(rng.anti_hermitian(n))).matrix();
  ComplexVector s(n);
  for (int i = 0; i < n; ++i) s(i) = std::pow(10.0, -8.0 * i / (n - 1));
  const ComplexMatrix a = q * s.asDiagonal() * q.adjoint();
  const ComplexVector b = rng.matrix(n, 1);
  const ComplexVector x = solve_linear(a, b);
  CHECK((a * x - b).norm() / b.norm() <= 1e-8);
}
