#include "qjunction/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qjunction/error.hpp"

namespace qjunction {

namespace {

using Index = Eigen::Index;

// G += c (B^T (x) A): block (j, l) of size d x d receives c B(l, j) A.
void add_sandwich(ComplexMatrix& g, const ComplexMatrix& a, const ComplexMatrix& b, Complex c) {
  const Index d = a.rows();
  for (Index l = 0; l < d; ++l)
    for (Index j = 0; j < d; ++j) {
      const Complex f = c * b(l, j);
      if (f != Complex(0.0)) g.block(j * d, l * d, d, d) += f * a;
    }
}

// G += c (I (x) A)
void add_left(ComplexMatrix& g, const ComplexMatrix& a, Complex c) {
  const Index d = a.rows();
  for (Index j = 0; j < d; ++j) g.block(j * d, j * d, d, d) += c * a;
}

// G += c (B^T (x) I)
void add_right(ComplexMatrix& g, const ComplexMatrix& b, Complex c) {
  const Index d = b.rows();
  for (Index l = 0; l < d; ++l)
    for (Index j = 0; j < d; ++j) {
      const Complex f = c * b(l, j);
      if (f == Complex(0.0)) continue;
      for (Index i = 0; i < d; ++i) g(i + j * d, i + l * d) += f;
    }
}

void add_dissipator(ComplexMatrix& g, const ComplexMatrix& s, const ComplexMatrix& sf, const ComplexMatrix& ss,
                    const ComplexMatrix& sts) {
  add_sandwich(g, sf, s, 1.0);
  add_sandwich(g, s, sf.adjoint(), 1.0);
  add_left(g, ss, -1.0);
  add_right(g, sts, -1.0);
}

void require_coupling(const Operator& s, std::size_t d) {
  if (s.dim() != d) {
    std::ostringstream os;
    os << "assemble_liouvillian: coupling operator has dimension " << s.dim() << ", Hamiltonian has " << d;
    throw DimensionMismatch(os.str());
  }
  const double defect = s.hermiticity_defect();
  if (defect > 1e-12 * std::max(1.0, max_abs(s.matrix())))
    throw HermiticityViolation("assemble_liouvillian: coupling operator is not Hermitian", defect);
}

Operator finish_hermitian(ComplexMatrix m) {
  Operator out(0.5 * (m + m.adjoint()), true);
  return out;
}

}  // namespace

Operator filtered_operator(const DissipatorSpec& d, const EigenSystem& eig) {
  const ComplexMatrix& v = eig.vectors;
  if (d.s.dim() != eig.dim()) throw DimensionMismatch("filtered_operator: operator and eigensystem differ in dimension");
  ComplexMatrix se = v.adjoint() * d.s.matrix() * v;
  const Index n = se.rows();
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j) {
      if (se(j, k) == Complex(0.0)) continue;
      se(j, k) *= d.rate(eig.values[k] - eig.values[j]);
    }
  return Operator(v * se * v.adjoint());
}

// ---------------------------------------------------------------------------

Liouvillian::Liouvillian(Operator h, EigenSystem eig, std::vector<BathTerm> baths, ComplexMatrix generator)
    : h_(std::move(h)), eig_(std::move(eig)), baths_(std::move(baths)), generator_(std::move(generator)) {
  for (const auto& b : baths_) {
    ss_.push_back(b.s.matrix() * b.s_filtered.matrix());
    sts_.push_back(b.s_filtered.matrix().adjoint() * b.s.matrix());
  }
}

bool Liouvillian::has_bath(BathLabel label) const {
  return std::any_of(baths_.begin(), baths_.end(), [&](const BathTerm& b) { return b.label == label; });
}

std::size_t Liouvillian::index(BathLabel label) const {
  for (std::size_t i = 0; i < baths_.size(); ++i)
    if (baths_[i].label == label) return i;
  throw UnknownLabel("Liouvillian: no bath with label " + to_string(label));
}

const BathTerm& Liouvillian::term(BathLabel label) const { return baths_[index(label)]; }

ComplexMatrix Liouvillian::coherent_block() const {
  const auto d = static_cast<Index>(dim());
  ComplexMatrix g = ComplexMatrix::Zero(d * d, d * d);
  add_left(g, h_.matrix(), -kI);
  add_right(g, h_.matrix(), kI);
  return g;
}

ComplexMatrix Liouvillian::dissipator_block(BathLabel label) const {
  const std::size_t i = index(label);
  const auto d = static_cast<Index>(dim());
  ComplexMatrix g = ComplexMatrix::Zero(d * d, d * d);
  add_dissipator(g, baths_[i].s.matrix(), baths_[i].s_filtered.matrix(), ss_[i], sts_[i]);
  return g;
}

ComplexMatrix Liouvillian::apply_dissipator(BathLabel label, const ComplexMatrix& rho) const {
  const std::size_t i = index(label);
  const ComplexMatrix& s = baths_[i].s.matrix();
  const ComplexMatrix& sf = baths_[i].s_filtered.matrix();
  return sf * rho * s + s * rho * sf.adjoint() - ss_[i] * rho - rho * sts_[i];
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
  const ComplexMatrix& h = h_.matrix();
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const auto& b : baths_) out += apply_dissipator(b.label, rho);
  return out;
}

Liouvillian assemble_liouvillian(const Operator& h, const std::vector<DissipatorSpec>& baths,
                                 const AssemblyOptions& options) {
  const std::size_t d = h.dim();
  EigenSystem eig = herm_eig(h);
  std::vector<BathTerm> terms;
  for (const auto& spec : baths) {
    require_coupling(spec.s, d);
    for (const auto& t : terms)
      if (t.label == spec.label) throw UnknownLabel("assemble_liouvillian: duplicate bath label " + to_string(spec.label));
    terms.push_back({spec.label, spec.s, filtered_operator(spec, eig)});
  }
  Liouvillian shell(h, eig, terms, ComplexMatrix());
  if (d > options.dense_limit) return shell;

  ComplexMatrix g = shell.coherent_block();
  for (const auto& t : terms) {
    const ComplexMatrix ss = t.s.matrix() * t.s_filtered.matrix();
    const ComplexMatrix sts = t.s_filtered.matrix().adjoint() * t.s.matrix();
    add_dissipator(g, t.s.matrix(), t.s_filtered.matrix(), ss, sts);
  }
  return Liouvillian(h, std::move(eig), std::move(terms), std::move(g));
}

// ---------------------------------------------------------------------------
// Steady state

namespace {

// Real unknowns for a Hermitian d x d matrix, laid out like vec(rho):
// slot (i, i) holds rho_ii, slot (i, j) with i < j holds Re rho_ij and slot
// (j, i) holds Im rho_ij.
RealVector solve_hermitian_coordinates(const ComplexMatrix& g, Index d) {
  const Index n = d * d;
  RealMatrix a(n, n);
  ComplexVector col(n);
  for (Index cj = 0; cj < d; ++cj) {
    for (Index ci = 0; ci < d; ++ci) {
      if (ci == cj) {
        col = g.col(ci + ci * d);
      } else if (ci < cj) {
        col = g.col(ci + cj * d) + g.col(cj + ci * d);
      } else {
        // slot (ci, cj) with ci > cj carries Im rho_{cj ci}
        col = kI * (g.col(cj + ci * d) - g.col(ci + cj * d));
      }
      auto out = a.col(ci + cj * d);
      for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
          if (i <= j)
            out[i + j * d] = col[i + j * d].real();
          else
            out[i + j * d] = col[j + i * d].imag();
        }
      }
    }
  }
  for (Index i = 0; i < d; ++i) a(0, i + i * d) += 1.0;
  RealVector b = RealVector::Zero(n);
  b[0] = 1.0;
  return solve_linear(std::move(a), b);
}

ComplexMatrix from_hermitian_coordinates(const RealVector& x, Index d) {
  ComplexMatrix rho(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i <= j; ++i) {
      if (i == j) {
        rho(i, i) = x[i + i * d];
      } else {
        rho(i, j) = Complex(x[i + j * d], x[j + i * d]);
        rho(j, i) = std::conj(rho(i, j));
      }
    }
  return rho;
}

ComplexMatrix solve_complex_dense(const ComplexMatrix& g, Index d) {
  const Index n = d * d;
  ComplexMatrix a = g;
  for (Index i = 0; i < d; ++i) a(0, i + i * d) += 1.0;
  ComplexVector b = ComplexVector::Zero(n);
  b[0] = 1.0;
  const ComplexVector x = solve_linear(std::move(a), b);
  return Eigen::Map<const ComplexMatrix>(x.data(), d, d);
}

// Corrected generator in the energy eigenbasis, applied matrix-free.  The
// rank-1 correction uses the ground-state projector of the eigenbasis; any
// trace-one right-hand side gives the same steady state.
class EigenbasisOperator {
 public:
  explicit EigenbasisOperator(const Liouvillian& l) : d_(static_cast<Index>(l.dim())) {
    const ComplexMatrix& v = l.eigensystem().vectors;
    const RealVector& w = l.eigensystem().values;
    omega_.resize(d_, d_);
    for (Index n = 0; n < d_; ++n)
      for (Index m = 0; m < d_; ++m) omega_(m, n) = w[m] - w[n];
    for (const auto& b : l.baths()) {
      Bath e;
      e.s = v.adjoint() * b.s.matrix() * v;
      e.sf = v.adjoint() * b.s_filtered.matrix() * v;
      e.sfa = e.sf.adjoint();
      e.ss = e.s * e.sf;
      e.sts = e.sfa * e.s;
      baths_.push_back(std::move(e));
    }
  }

  Index dim() const { return d_; }
  Index size() const { return d_ * d_; }

  void apply(const ComplexVector& x, ComplexVector& y) const {
    Eigen::Map<const ComplexMatrix> rho(x.data(), d_, d_);
    ComplexMatrix out = -kI * omega_.cast<Complex>().cwiseProduct(rho);
    for (const auto& b : baths_) {
      out.noalias() += b.sf * (rho * b.s);
      out.noalias() += b.s * (rho * b.sfa);
      out.noalias() -= b.ss * rho;
      out.noalias() -= rho * b.sts;
    }
    out(0, 0) += rho.trace();
    y = Eigen::Map<const ComplexVector>(out.data(), size());
  }

  // Element (m, n) of L~(E_ab).
  Complex element(Index m, Index n, Index a, Index b) const {
    Complex v = 0.0;
    if (m == a && n == b) v += -kI * omega_(a, b);
    for (const auto& e : baths_) {
      v += e.sf(m, a) * e.s(b, n) + e.s(m, a) * e.sfa(b, n);
      if (n == b) v -= e.ss(m, a);
      if (m == a) v -= e.sts(b, n);
    }
    if (m == 0 && n == 0 && a == b) v += 1.0;
    return v;
  }

  double omega(Index m, Index n) const { return omega_(m, n); }

 private:
  struct Bath {
    ComplexMatrix s, sf, sfa, ss, sts;
  };
  Index d_;
  RealMatrix omega_;
  std::vector<Bath> baths_;
};

// Dense LU on populations and nearly secular coherences, diagonal elsewhere.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const EigenbasisOperator& op, double window, std::size_t max_block) : n_(op.size()) {
    const Index d = op.dim();
    std::vector<std::pair<double, Index>> candidates;
    for (Index b = 0; b < d; ++b)
      for (Index a = 0; a < d; ++a) {
        const double w = std::abs(op.omega(a, b));
        if (a == b || w <= window) candidates.push_back({a == b ? -1.0 : w, a + b * d});
      }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    const std::size_t keep = std::max<std::size_t>(static_cast<std::size_t>(d), std::min(max_block, candidates.size()));
    for (std::size_t i = 0; i < std::min(keep, candidates.size()); ++i) block_.push_back(candidates[i].second);
    std::sort(block_.begin(), block_.end());

    const auto nb = static_cast<Index>(block_.size());
    ComplexMatrix b(nb, nb);
    for (Index q = 0; q < nb; ++q) {
      const Index ca = block_[static_cast<std::size_t>(q)] % d, cb = block_[static_cast<std::size_t>(q)] / d;
      for (Index p = 0; p < nb; ++p) {
        const Index rm = block_[static_cast<std::size_t>(p)] % d, rn = block_[static_cast<std::size_t>(p)] / d;
        b(p, q) = op.element(rm, rn, ca, cb);
      }
    }
    lu_.compute(b);
    diag_.resize(n_);
    for (Index p = 0; p < n_; ++p) {
      Complex v = op.element(p % d, p / d, p % d, p / d);
      if (std::abs(v) < 1e-14) v = 1.0;
      diag_[p] = v;
    }
  }

  std::size_t block_size() const { return block_.size(); }

  void apply(const ComplexVector& r, ComplexVector& z) const {
    z = r.cwiseQuotient(diag_);
    ComplexVector rb(static_cast<Index>(block_.size()));
    for (std::size_t i = 0; i < block_.size(); ++i) rb[static_cast<Index>(i)] = r[block_[i]];
    const ComplexVector zb = lu_.solve(rb);
    for (std::size_t i = 0; i < block_.size(); ++i) z[block_[i]] = zb[static_cast<Index>(i)];
  }

 private:
  Index n_;
  std::vector<Index> block_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  ComplexVector diag_;
};

struct GmresOutcome {
  ComplexVector x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Right-preconditioned restarted GMRES with Givens rotations.
GmresOutcome gmres(const EigenbasisOperator& op, const BlockPreconditioner& pre, const ComplexVector& b,
                   double tol, std::size_t restart, std::size_t max_iterations) {
  const Index n = op.size();
  const auto m = static_cast<Index>(restart);
  GmresOutcome out;
  out.x = ComplexVector::Zero(n);
  const double bnorm = b.norm();
  ComplexVector r = b;
  double beta = bnorm;
  ComplexMatrix v(n, m + 1);
  ComplexMatrix h = ComplexMatrix::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  ComplexVector gvec(m + 1), z(n), w(n);

  while (out.iterations < max_iterations) {
    v.col(0) = r / beta;
    gvec.setZero();
    gvec[0] = beta;
    h.setZero();
    Index k = 0;
    double resid = beta;
    for (; k < m && out.iterations < max_iterations; ++k) {
      ++out.iterations;
      pre.apply(v.col(k), z);
      op.apply(z, w);
      for (Index i = 0; i <= k; ++i) {
        h(i, k) = v.col(i).dot(w);
        w -= h(i, k) * v.col(i);
      }
      const double hn = w.norm();
      h(k + 1, k) = hn;
      if (hn > 0.0) v.col(k + 1) = w / hn;
      for (Index i = 0; i < k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Complex t = cs[iu] * h(i, k) + sn[iu] * h(i + 1, k);
        h(i + 1, k) = -std::conj(sn[iu]) * h(i, k) + cs[iu] * h(i + 1, k);
        h(i, k) = t;
      }
      const Complex a = h(k, k);
      const Complex bb = h(k + 1, k);
      const double rho = std::hypot(std::abs(a), std::abs(bb));
      const auto ku = static_cast<std::size_t>(k);
      if (std::abs(a) == 0.0) {
        cs[ku] = 0.0;
        sn[ku] = 1.0;
      } else {
        cs[ku] = std::abs(a) / rho;
        sn[ku] = a * std::conj(bb) / (std::abs(a) * rho);
      }
      h(k, k) = cs[ku] * a + sn[ku] * bb;
      h(k + 1, k) = 0.0;
      gvec[k + 1] = -std::conj(sn[ku]) * gvec[k];
      gvec[k] = cs[ku] * gvec[k];
      resid = std::abs(gvec[k + 1]);
      if (resid <= tol * bnorm || hn == 0.0) {
        ++k;
        break;
      }
    }
    const ComplexVector y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(gvec.head(k));
    pre.apply(v.leftCols(k) * y, z);
    out.x += z;
    op.apply(out.x, w);
    r = b - w;
    beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (beta <= tol * bnorm) break;
  }
  return out;
}

}  // namespace

NessResult ness_solve(const Liouvillian& l, const NessOptions& options) {
  const auto d = static_cast<Index>(l.dim());
  NessMethod method = options.method;
  if (method == NessMethod::automatic) method = l.dense() ? NessMethod::hermitian_dense : NessMethod::iterative;
  if (!l.dense() && method != NessMethod::iterative)
    throw Error("ness_solve: dense methods need a stored generator (raise AssemblyOptions::dense_limit)");

  NessResult res;
  ComplexMatrix rho;
  try {
    switch (method) {
      case NessMethod::hermitian_dense:
        rho = from_hermitian_coordinates(solve_hermitian_coordinates(l.generator(), d), d);
        res.method = "hermitian-dense";
        break;
      case NessMethod::complex_dense:
        rho = solve_complex_dense(l.generator(), d);
        res.method = "complex-dense";
        break;
      case NessMethod::iterative:
      case NessMethod::automatic: {
        const EigenbasisOperator op(l);
        const BlockPreconditioner pre(op, options.secular_window, options.max_block);
        ComplexVector b = ComplexVector::Zero(op.size());
        b[0] = 1.0;
        const GmresOutcome g =
            gmres(op, pre, b, options.iterative_tolerance, options.gmres_restart, options.max_iterations);
        if (!g.x.allFinite()) throw SingularSystem("ness_solve: iterative solve diverged");
        const ComplexMatrix& v = l.eigensystem().vectors;
        rho = v * Eigen::Map<const ComplexMatrix>(g.x.data(), d, d) * v.adjoint();
        res.iterations = g.iterations;
        res.method = "iterative";
        break;
      }
    }
  } catch (const SingularSystem& e) {
    throw NonuniqueSteadyState(std::string("ness_solve: corrected system is singular; ") + e.what());
  }

  const Complex tr = rho.trace();
  if (!(std::abs(tr) > 0.0)) throw NonuniqueSteadyState("ness_solve: steady state has zero trace");
  rho /= tr;
  res.asymmetry = max_abs(rho - rho.adjoint());
  res.rho = finish_hermitian(std::move(rho));
  const ComplexMatrix lr = l.apply(res.rho.matrix());
  res.residual = lr.norm();
  res.ill_conditioned = res.residual > 1e-6;
  res.min_eigenvalue = herm_eigvals(res.rho, 1)[0];
  if (l.has_bath(BathLabel::left)) res.j_left = heat_current(l, res.rho, l.hamiltonian(), BathLabel::left);
  if (l.has_bath(BathLabel::right)) res.j_right = heat_current(l, res.rho, l.hamiltonian(), BathLabel::right);
  return res;
}

double heat_current(const Liouvillian& l, const Operator& rho, const Operator& h, BathLabel label) {
  if (rho.dim() != l.dim() || h.dim() != l.dim()) throw DimensionMismatch("heat_current: dimension mismatch");
  const ComplexMatrix dr = l.apply_dissipator(label, rho.matrix());
  const Complex j = dr.cwiseProduct(h.matrix().transpose()).sum();
  if (std::abs(j.imag()) > 1e-9 * std::max(1.0, std::abs(j.real()))) {
    std::ostringstream os;
    os << "heat_current: imaginary part " << j.imag() << " exceeds 1e-9";
    throw Error(os.str());
  }
  return j.real();
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

// exp(a) x by Taylor series with `terms` terms.
template <class Apply>
ComplexVector taylor_step(const Apply& apply_scaled, const ComplexVector& x, int terms) {
  ComplexVector sum = x;
  ComplexVector term = x;
  for (int k = 1; k <= terms; ++k) {
    term = apply_scaled(term) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

int taylor_terms(double scaled_norm, double budget) {
  double term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= scaled_norm / static_cast<double>(k);
    if (term <= budget) return k;
  }
  return 60;
}

}  // namespace

Operator propagate(const Liouvillian& l, const Operator& rho0, double t_final, const PropagationControl& control) {
  if (rho0.dim() != l.dim()) throw DimensionMismatch("propagate: initial state has the wrong dimension");
  if (!(t_final >= 0.0)) throw DomainError("propagate: t_final must be >= 0");
  const auto d = static_cast<Index>(l.dim());
  const Index n = d * d;
  ComplexVector x = Eigen::Map<const ComplexVector>(rho0.matrix().data(), n);
  if (t_final == 0.0) return rho0;

  ComplexMatrix g;
  const bool want_dense = static_cast<std::size_t>(n) <= control.max_dense_dim;
  if (l.dense()) {
    g = l.generator();
  } else if (want_dense) {
    g = l.coherent_block();
    for (const auto& b : l.baths()) g += l.dissipator_block(b.label);
  }

  double norm = 0.0;
  if (g.size() > 0) {
    norm = g.cwiseAbs().colwise().sum().maxCoeff();
  } else {
    norm = 2.0 * l.hamiltonian().matrix().norm();
    for (const auto& b : l.baths()) norm += 4.0 * b.s.matrix().norm() * b.s_filtered.matrix().norm();
  }
  if (norm == 0.0) return rho0;

  const double h = std::min(control.max_step, 0.5 / norm);
  if (h < 1e-14 * t_final) throw StiffnessError("propagate: step size underflow");
  const int terms = taylor_terms(norm * h, control.tolerance * h);
  const double steps_real = std::floor(t_final / h);
  const double remainder = t_final - steps_real * h;

  const auto apply_vec = [&](double scale) {
    return [&, scale](const ComplexVector& v) -> ComplexVector {
      if (g.size() > 0) return scale * (g * v);
      Eigen::Map<const ComplexMatrix> m(v.data(), d, d);
      const ComplexMatrix out = l.apply(m);
      return scale * Eigen::Map<const ComplexVector>(out.data(), n);
    };
  };

  if (steps_real <= static_cast<double>(control.max_vector_steps)) {
    const auto step = apply_vec(h);
    for (auto i = static_cast<std::size_t>(steps_real); i > 0; --i) x = taylor_step(step, x, terms);
  } else {
    if (g.size() == 0) {
      std::ostringstream os;
      os << "propagate: " << steps_real << " steps needed and the generator is too large to square";
      throw StiffnessError(os.str());
    }
    // Dense step propagator, then binary powering.
    ComplexMatrix e = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    const ComplexMatrix gh = h * g;
    for (int k = 1; k <= terms; ++k) {
      term = (gh * term) / static_cast<double>(k);
      e += term;
    }
    auto count = static_cast<unsigned long long>(steps_real);
    while (count > 0) {
      if (count & 1ULL) x = e * x;
      count >>= 1ULL;
      if (count > 0) e = e * e;
    }
  }
  if (remainder > 0.0) {
    const int rterms = taylor_terms(norm * remainder, control.tolerance * std::max(remainder, 1e-300));
    x = taylor_step(apply_vec(remainder), x, rterms);
  }
  return Operator(Eigen::Map<const ComplexMatrix>(x.data(), d, d));
}

}  // namespace qjunction
