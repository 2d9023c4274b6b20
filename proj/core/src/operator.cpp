#include "qjunction/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "dense.hpp"
#include "lapack.hpp"
#include "qjunction/error.hpp"

namespace qjunction {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPhaseTol = 1e-8;

double scaled_tol(const ComplexMatrix& m) { return kHermitianTol * std::max(1.0, max_abs(m)); }

void fix_phases(ComplexMatrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double mag = std::abs(v(r, c));
      if (mag > kPhaseTol) {
        const Complex phase = std::conj(v(r, c)) / mag;
        v.col(c) *= phase;
        v(r, c) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_hermitian(const Operator& h, const char* who) {
  if (h.dim() == 0) throw DimensionMismatch(std::string(who) + ": empty operator");
  const double defect = h.hermiticity_defect();
  if (defect > scaled_tol(h.matrix())) {
    std::ostringstream os;
    os << who << ": operator is not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw HermiticityViolation(os.str(), defect);
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Operator::Operator(ComplexMatrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("Operator: matrix is not square");
}

Operator Operator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator(ComplexMatrix::Identity(n, n), true);
}

Operator Operator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator(ComplexMatrix::Zero(n, n), true);
}

double Operator::hermiticity_defect() const { return max_abs(m_ - m_.adjoint()); }

bool Operator::mark_hermitian_if(double tol) {
  hermitian_ = hermiticity_defect() <= tol;
  return hermitian_;
}

bool Operator::is_real() const {
  for (Eigen::Index k = 0; k < m_.size(); ++k)
    if (m_.data()[k].imag() != 0.0) return false;
  return true;
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), hermitian_); }

Operator& Operator::operator+=(const Operator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("Operator +: dimension mismatch");
  m_ += o.m_;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("Operator -: dimension mismatch");
  m_ -= o.m_;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  m_ *= s;
  hermitian_ = hermitian_ && s.imag() == 0.0;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("Operator *: dimension mismatch");
  return Operator(a.m_ * b.m_);
}

Operator kron(const Operator& a, const Operator& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index j = 0; j < na; ++j)
    for (Eigen::Index i = 0; i < na; ++i)
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  return Operator(std::move(out), a.hermitian() && b.hermitian());
}

Operator kron(std::initializer_list<Operator> factors) {
  if (factors.size() == 0) throw DimensionMismatch("kron: no factors");
  auto it = factors.begin();
  Operator acc = *it++;
  for (; it != factors.end(); ++it) acc = kron(acc, *it);
  return acc;
}

Operator pauli(Pauli kind) {
  ComplexMatrix m(2, 2);
  switch (kind) {
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, -kI, kI, 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
    case Pauli::identity: m << 1, 0, 0, 1; break;
  }
  return Operator(std::move(m), true);
}

Operator ladder(std::size_t m) {
  if (m < 2) throw InvalidTruncation("ladder: truncation must be at least 2, got " + std::to_string(m));
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  return Operator(std::move(a));
}

Operator number(std::size_t m) {
  if (m < 2) throw InvalidTruncation("number: truncation must be at least 2, got " + std::to_string(m));
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix nm = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) nm(k, k) = static_cast<double>(k);
  return Operator(std::move(nm), true);
}

namespace {

double rel(double err, double scale) { return err / std::max(1.0, scale); }

// Compares the backend against Eigen's built-in kernels on fixed matrices.
// Some OpenBLAS builds pick CPU kernels that return wrong numbers without
// any error code, so this runs once before the first LAPACK call.
std::string run_self_check() {
  constexpr Eigen::Index n = 400;
  constexpr double tol = 1e-9;
  RealMatrix r(n, n);
  ComplexMatrix c(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      r(i, j) = std::sin(0.37 * static_cast<double>(i) + 1.13 * static_cast<double>(j) * static_cast<double>(j % 7));
      c(i, j) = Complex(r(i, j), std::cos(0.71 * static_cast<double>(i * j % 13) + 0.2 * static_cast<double>(i)));
    }
  const RealMatrix rs = r + r.transpose();
  const ComplexMatrix ch = c + c.adjoint();
  // shifted so that the solves are well conditioned
  r.diagonal().array() += static_cast<double>(n);
  c.diagonal().array() += static_cast<double>(n);
  std::ostringstream bad;

  {
    RealMatrix a = rs;
    RealVector w(n);
    LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    const double e = (a * w.asDiagonal() * a.transpose() - rs).norm();
    if (!(rel(e, rs.norm()) < tol)) bad << " dsyevd";
  }
  {
    ComplexMatrix a = ch;
    RealVector w(n);
    LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    const double e = (a * w.asDiagonal() * a.adjoint() - ch).norm();
    if (!(rel(e, ch.norm()) < tol)) bad << " zheevd";
  }
  {
    RealMatrix a = r;
    RealVector x = RealVector::Ones(n);
    std::vector<lapack_int> piv(static_cast<std::size_t>(n));
    LAPACKE_dgesv(LAPACK_COL_MAJOR, n, 1, a.data(), n, piv.data(), x.data(), n);
    if (!(rel((r * x - RealVector::Ones(n)).norm(), 1.0) < tol)) bad << " dgesv";
  }
  {
    ComplexMatrix a = c;
    ComplexVector x = ComplexVector::Ones(n);
    std::vector<lapack_int> piv(static_cast<std::size_t>(n));
    LAPACKE_zgesv(LAPACK_COL_MAJOR, n, 1, a.data(), n, piv.data(), x.data(), n);
    if (!(rel((c * x - ComplexVector::Ones(n)).norm(), 1.0) < tol)) bad << " zgesv";
  }
  {
    RealMatrix a = rs;
    RealVector w(n);
    RealMatrix z(1, 1);
    lapack_int found = 0;
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, 3, 0.0, &found, w.data(), z.data(), 1,
                   support.data());
    Eigen::SelfAdjointEigenSolver<RealMatrix> ref(rs, Eigen::EigenvaluesOnly);
    if (found != 3 || !(rel(std::abs(w[0] - ref.eigenvalues()[0]), rs.norm()) < tol)) bad << " dsyevr";
  }
  {
    RealMatrix p(n, n);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasTrans, n, n, n, 1.0, r.data(), n, rs.data(), n, 0.0, p.data(), n);
    const RealMatrix ref = r.lazyProduct(rs.transpose());
    if (!(rel((p - ref).norm(), ref.norm()) < tol)) bad << " dgemm";
  }
  {
    ComplexMatrix p(n, n);
    const Complex one(1.0, 0.0), zero(0.0, 0.0);
    cblas_zgemm(CblasColMajor, CblasNoTrans, CblasConjTrans, n, n, n, &one, c.data(), n, ch.data(), n, &zero, p.data(),
                n);
    const ComplexMatrix ref = c.lazyProduct(ch.adjoint());
    if (!(rel((p - ref).norm(), ref.norm()) < tol)) bad << " zgemm";
  }
  const std::string routines = bad.str();
  if (routines.empty()) return {};
  return "LAPACK/BLAS backend self-check failed for" + routines +
         "; the BLAS library selected a faulty CPU kernel (with OpenBLAS, set OPENBLAS_CORETYPE=Haswell)";
}

}  // namespace

std::string linear_algebra_self_check() {
  static const std::string diagnosis = run_self_check();
  return diagnosis;
}

namespace {

void require_backend() {
  const std::string& diagnosis = linear_algebra_self_check();
  if (!diagnosis.empty()) throw Error(diagnosis);
}

}  // namespace

EigenSystem herm_eig(const Operator& h) {
  require_hermitian(h, "herm_eig");
  require_backend();
  const auto n = static_cast<lapack_int>(h.dim());
  EigenSystem es;
  es.values.resize(n);
  lapack_int info = 0;
  if (h.is_real()) {
    RealMatrix a = hermitian_part(h.matrix()).real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, es.values.data());
    es.vectors = a.cast<Complex>();
  } else {
    es.vectors = hermitian_part(h.matrix());
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, es.vectors.data(), n, es.values.data());
  }
  if (info != 0) throw Error("herm_eig: LAPACK eigensolver failed, info = " + std::to_string(info));
  fix_phases(es.vectors);
  return es;
}

RealVector herm_eigvals(const Operator& h, std::size_t count) {
  require_hermitian(h, "herm_eigvals");
  require_backend();
  if (h.is_real()) {
    RealMatrix a = hermitian_part(h.matrix()).real();
    return detail::lowest_eigenvalues(a, count);
  }
  const auto n = static_cast<lapack_int>(h.dim());
  const auto want = static_cast<lapack_int>(std::min<std::size_t>(count, h.dim()));
  if (want == 0) return RealVector();
  RealVector w(n);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  ComplexMatrix a = hermitian_part(h.matrix());
  ComplexMatrix z(1, 1);
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, want, 0.0,
                                         &found, w.data(), z.data(), 1, support.data());
  if (info != 0 || found != want)
    throw Error("herm_eigvals: LAPACK eigensolver failed, info = " + std::to_string(info));
  return w.head(want);
}

Operator unitary_exp(const Operator& k) {
  const double defect = max_abs(k.matrix() + k.matrix().adjoint());
  if (defect > scaled_tol(k.matrix())) {
    std::ostringstream os;
    os << "unitary_exp: generator is not anti-Hermitian (max |K + K^dagger| = " << defect << ")";
    throw HermiticityViolation(os.str(), defect);
  }
  // k = -i h with h = i k Hermitian, so exp(k) = V exp(-i w) V^dagger.
  const Operator h(kI * k.matrix(), true);
  const EigenSystem es = herm_eig(h);
  ComplexVector phases(es.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::exp(-kI * es.values[i]);
  ComplexMatrix u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
  return Operator(std::move(u));
}

namespace {

// c = a * op(b) through BLAS; Eigen's own kernels are several times slower at
// the polaron-spectrum sizes.
RealMatrix gemm(const RealMatrix& a, const RealMatrix& b, bool transpose_b) {
  RealMatrix c(a.rows(), transpose_b ? b.rows() : b.cols());
  const auto k = static_cast<blasint>(a.cols());
  cblas_dgemm(CblasColMajor, CblasNoTrans, transpose_b ? CblasTrans : CblasNoTrans, static_cast<blasint>(c.rows()),
              static_cast<blasint>(c.cols()), k, 1.0, a.data(), static_cast<blasint>(a.rows()), b.data(),
              static_cast<blasint>(b.rows()), 0.0, c.data(), static_cast<blasint>(c.rows()));
  return c;
}

ComplexMatrix gemm(const ComplexMatrix& a, const ComplexMatrix& b, bool adjoint_b) {
  ComplexMatrix c(a.rows(), adjoint_b ? b.rows() : b.cols());
  const Complex one(1.0, 0.0), zero(0.0, 0.0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, adjoint_b ? CblasConjTrans : CblasNoTrans, static_cast<blasint>(c.rows()),
              static_cast<blasint>(c.cols()), static_cast<blasint>(a.cols()), &one, a.data(),
              static_cast<blasint>(a.rows()), b.data(), static_cast<blasint>(b.rows()), &zero, c.data(),
              static_cast<blasint>(c.rows()));
  return c;
}

}  // namespace

Operator similarity(const Operator& u, const Operator& h) {
  if (u.dim() != h.dim()) throw DimensionMismatch("similarity: dimension mismatch");
  require_backend();
  if (u.is_real() && h.is_real()) {
    const RealMatrix ur = u.matrix().real();
    const RealMatrix out = gemm(gemm(ur, h.matrix().real(), false), ur, true);
    return Operator(out.cast<Complex>(), h.hermitian());
  }
  ComplexMatrix out = gemm(gemm(u.matrix(), h.matrix(), false), u.matrix(), true);
  return Operator(std::move(out), h.hermitian());
}

namespace {

// Pivot size says little about rank: an exactly singular system can keep
// every pivot at O(1).  Use the LAPACK 1-norm condition estimate instead and
// call anything with rcond below machine epsilon singular.
void check_condition(lapack_int info, double rcond) {
  if (info > 0 || !(rcond >= std::numeric_limits<double>::epsilon())) {
    std::ostringstream os;
    os << "solve_linear: numerically singular system (";
    if (info > 0)
      os << "zero pivot " << info - 1;
    else
      os << "rcond " << rcond;
    os << ")";
    throw SingularSystem(os.str());
  }
}

template <class Matrix, class Vector>
void check_shapes(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("solve_linear: matrix is not square");
  if (b.size() != a.rows()) throw DimensionMismatch("solve_linear: right-hand side length mismatch");
}

}  // namespace

ComplexVector solve_linear(ComplexMatrix a, const ComplexVector& b) {
  check_shapes(a, b);
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return ComplexVector();
  require_backend();
  const double norm1 = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', n, n, a.data(), n);
  ComplexMatrix& lu = a;
  std::vector<lapack_int> piv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, piv.data());
  if (info < 0) throw Error("solve_linear: zgetrf argument error");
  double rcond = 0.0;
  if (info == 0) LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu.data(), n, norm1, &rcond);
  check_condition(info, rcond);
  ComplexVector x = b;
  LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu.data(), n, piv.data(), x.data(), n);
  return x;
}

RealVector solve_linear(RealMatrix a, const RealVector& b) {
  check_shapes(a, b);
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return RealVector();
  require_backend();
  const double norm1 = LAPACKE_dlange(LAPACK_COL_MAJOR, '1', n, n, a.data(), n);
  RealMatrix& lu = a;
  std::vector<lapack_int> piv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, piv.data());
  if (info < 0) throw Error("solve_linear: dgetrf argument error");
  double rcond = 0.0;
  if (info == 0) LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', n, lu.data(), n, norm1, &rcond);
  check_condition(info, rcond);
  RealVector x = b;
  LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu.data(), n, piv.data(), x.data(), n);
  return x;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

namespace detail {

RealMatrix gemm_transposed(const RealMatrix& a, const RealMatrix& b) {
  require_backend();
  return gemm(a, b, true);
}

RealVector lowest_eigenvalues(RealMatrix& a, std::size_t count) {
  require_backend();
  const auto n = static_cast<lapack_int>(a.rows());
  const auto want = static_cast<lapack_int>(std::min<std::size_t>(count, static_cast<std::size_t>(a.rows())));
  if (want == 0) return RealVector();
  RealVector w(n);
  RealMatrix z(1, 1);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, want, 0.0,
                                         &found, w.data(), z.data(), 1, support.data());
  if (info != 0 || found != want)
    throw Error("herm_eigvals: LAPACK eigensolver failed, info = " + std::to_string(info));
  return w.head(want);
}

}  // namespace detail

}  // namespace qjunction
