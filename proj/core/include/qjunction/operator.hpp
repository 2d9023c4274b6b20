#pragma once

// Dense complex operator algebra: Pauli and truncated bosonic operators,
// tensor products, Hermitian eigendecomposition, unitary exponentials and
// dense linear solves.  Storage is an Eigen column-major complex matrix;
// the heavy factorizations go through LAPACK.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qjunction {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Square dense complex matrix.  The Hermitian flag is metadata set by the
/// constructors that know it (Pauli matrices, Hamiltonians, ...).
class Operator {
 public:
  Operator() = default;
  explicit Operator(ComplexMatrix m, bool hermitian = false);

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  bool hermitian() const noexcept { return hermitian_; }
  /// max |A - A^dagger| entry.
  double hermiticity_defect() const;
  /// Checks the defect against `tol` and sets the flag; returns the flag.
  bool mark_hermitian_if(double tol = 1e-12);

  /// True when every imaginary part is exactly zero.
  bool is_real() const;

  Operator adjoint() const;
  Complex trace() const { return m_.trace(); }

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= Complex(s, 0.0); }
  friend Operator operator*(double s, Operator a) { return a *= Complex(s, 0.0); }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  ComplexMatrix m_;
  bool hermitian_ = false;
};

enum class Pauli { x, y, z, identity };

/// Eigenvalues ascending, eigenvectors as unitary columns.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.size()); }
  /// values[m] - values[n]
  double bohr(std::size_t m, std::size_t n) const { return values[m] - values[n]; }
};

Operator kron(const Operator& a, const Operator& b);
Operator kron(std::initializer_list<Operator> factors);

Operator pauli(Pauli kind);

/// m x m truncated annihilation operator, <n|a|n+1> = sqrt(n+1).
Operator ladder(std::size_t m);

/// a^dagger a on m levels.
Operator number(std::size_t m);

/// Full eigendecomposition of a Hermitian operator.  Eigenvector phases are
/// fixed so that the first non-negligible component is real and positive.
EigenSystem herm_eig(const Operator& h);

/// Lowest `count` eigenvalues only, ascending.
RealVector herm_eigvals(const Operator& h, std::size_t count);

/// exp(k) for anti-Hermitian k, through the eigendecomposition of i k.
Operator unitary_exp(const Operator& k);

/// U h U^dagger.  Uses real arithmetic when both inputs are real.
Operator similarity(const Operator& u, const Operator& h);

/// Dense LU solve with partial pivoting.  Throws SingularSystem when the
/// estimated reciprocal 1-norm condition number falls below machine epsilon.  `a` is taken by value and
/// factored in place; move large systems in.
ComplexVector solve_linear(ComplexMatrix a, const ComplexVector& b);
RealVector solve_linear(RealMatrix a, const RealVector& b);

/// Checks the LAPACK/BLAS backend once against Eigen's own kernels.  Empty
/// when healthy, otherwise a diagnosis; every LAPACK-backed function throws
/// Error with that diagnosis instead of returning wrong numbers.
std::string linear_algebra_self_check();

/// Commutator a b - b a.
Operator commutator(const Operator& a, const Operator& b);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

}  // namespace qjunction
