#include "qjunction/rc_embedding.hpp"

#include <cmath>

#include <Eigen/SparseCore>

#include "dense.hpp"
#include "qjunction/error.hpp"

namespace qjunction {

Operator coupling_operator(double angle) {
  return std::cos(angle) * pauli(Pauli::z) + std::sin(angle) * pauli(Pauli::x);
}

RCModel build_rc_model(const JunctionSpec& spec) {
  spec.validate();
  const std::size_t m = spec.truncation;
  const Operator id2 = pauli(Pauli::identity);
  const Operator idm = Operator::identity(m);
  const Operator a = ladder(m);
  const Operator n = number(m);
  Operator x = a + a.adjoint();
  x.mark_hermitian_if();

  RCModel model;
  model.spec = spec;
  model.h_s_rc = spec.delta * kron({pauli(Pauli::z), idm, idm});
  model.h_s_rc += spec.left.omega * kron({id2, n, idm});
  model.h_s_rc += spec.right.omega * kron({id2, idm, n});
  model.h_s_rc += spec.left.lambda * kron({coupling_operator(spec.left.angle), x, idm});
  model.h_s_rc += spec.right.lambda * kron({coupling_operator(spec.right.angle), idm, x});
  model.h_s_rc.mark_hermitian_if();
  model.s_res_left = kron({id2, x, idm});
  model.s_res_right = kron({id2, idm, x});
  return model;
}

Operator polaron_generator(const JunctionSpec& spec) {
  spec.validate();
  const std::size_t m = spec.truncation;
  const Operator idm = Operator::identity(m);
  const Operator a = ladder(m);
  const Operator p = a.adjoint() - a;
  Operator k = (spec.left.lambda / spec.left.omega) * kron({coupling_operator(spec.left.angle), p, idm});
  k += (spec.right.lambda / spec.right.omega) * kron({coupling_operator(spec.right.angle), idm, p});
  return k;
}

Operator polaron_unitary(const JunctionSpec& spec) {
  spec.validate();
  const auto m = static_cast<Eigen::Index>(spec.truncation);
  const Eigen::Index mm = m * m;
  const Eigen::Index n = 2 * mm;

  // a^dagger - a = -i X with X = i (a^dagger - a) Hermitian; X = W diag(x) W^dagger.
  const Operator a = ladder(spec.truncation);
  const Operator xq(kI * (a.adjoint() - a).matrix(), true);
  const EigenSystem quad = herm_eig(xq);
  const ComplexMatrix& w = quad.vectors;
  const RealVector& xs = quad.values;

  const double cl = spec.left.lambda / spec.left.omega;
  const double cr = spec.right.lambda / spec.right.omega;
  const double szl = std::cos(spec.left.angle), sxl = std::sin(spec.left.angle);
  const double szr = std::cos(spec.right.angle), sxr = std::sin(spec.right.angle);

  // In the quadrature eigenbasis K is block diagonal: -i (bz sz + bx sx) for
  // each pair (k, l) of RC quadrature eigenvalues.
  // blocks[s][s'](k, l) holds <s| exp(-i b.sigma) |s'>.
  ComplexMatrix blocks[2][2];
  for (auto& row : blocks)
    for (auto& b : row) b.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = 0; l < m; ++l) {
      const double bz = cl * xs[k] * szl + cr * xs[l] * szr;
      const double bx = cl * xs[k] * sxl + cr * xs[l] * sxr;
      const double norm = std::hypot(bz, bx);
      const double c = std::cos(norm);
      const double sinc = norm > 0.0 ? std::sin(norm) / norm : 1.0;
      blocks[0][0](k, l) = Complex(c, -sinc * bz);
      blocks[1][1](k, l) = Complex(c, sinc * bz);
      blocks[0][1](k, l) = Complex(0.0, -sinc * bx);
      blocks[1][0](k, l) = Complex(0.0, -sinc * bx);
    }
  }

  // U[(s,i,j),(s',i',j')] = sum_{k,l} B_ss'(k,l) W(i,k) W(j,l) conj(W(i',k) W(j',l)).
  ComplexMatrix u(n, n);
  std::vector<ComplexMatrix> partial(static_cast<std::size_t>(m));
  ComplexVector g(m);
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      const ComplexMatrix& b = blocks[s][t];
      for (Eigen::Index l = 0; l < m; ++l)
        partial[static_cast<std::size_t>(l)] = w * b.col(l).asDiagonal() * w.adjoint();
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index ip = 0; ip < m; ++ip) {
          for (Eigen::Index l = 0; l < m; ++l) g[l] = partial[static_cast<std::size_t>(l)](i, ip);
          u.block(s * mm + i * m, t * mm + ip * m, m, m) = w * g.asDiagonal() * w.adjoint();
        }
      }
    }
  }
  // K is real, so exp(K) is real; drop the rounding-level imaginary residue.
  return Operator(u.real().cast<Complex>());
}

namespace {

// Real sparse copy of h_s_rc built straight from its matrix elements; at
// m_large = 40 the dense complex route spends most of its time on copies.
Eigen::SparseMatrix<double> sparse_hamiltonian(const JunctionSpec& s) {
  const auto m = static_cast<Eigen::Index>(s.truncation);
  const Eigen::Index mm = m * m;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * mm * 7));
  const double zl = std::cos(s.left.angle), xl = std::sin(s.left.angle);
  const double zr = std::cos(s.right.angle), xr = std::sin(s.right.angle);
  auto at = [&](int q, Eigen::Index i, Eigen::Index j) { return q * mm + i * m + j; };
  for (int q = 0; q < 2; ++q) {
    const double sz = q == 0 ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index r = at(q, i, j);
        t.emplace_back(r, r, s.delta * sz + s.left.omega * static_cast<double>(i) + s.right.omega * static_cast<double>(j));
        // lambda S (x) x couples i -> i+1 with sqrt(i+1); sz is diagonal, sx flips q
        if (i + 1 < m) {
          const double g = s.left.lambda * std::sqrt(static_cast<double>(i + 1));
          for (int p = 0; p < 2; ++p) {
            const double sv = p == q ? zl * sz : xl;
            if (sv == 0.0) continue;
            t.emplace_back(r, at(p, i + 1, j), g * sv);
            t.emplace_back(at(p, i + 1, j), r, g * sv);
          }
        }
        if (j + 1 < m) {
          const double g = s.right.lambda * std::sqrt(static_cast<double>(j + 1));
          for (int p = 0; p < 2; ++p) {
            const double sv = p == q ? zr * sz : xr;
            if (sv == 0.0) continue;
            t.emplace_back(r, at(p, i, j + 1), g * sv);
            t.emplace_back(at(p, i, j + 1), r, g * sv);
          }
        }
      }
  }
  Eigen::SparseMatrix<double> h(2 * mm, 2 * mm);
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

}  // namespace

std::vector<SpectrumPoint> polaron_spectrum(const JunctionSpec& spec, std::size_t m_large, std::size_t n_levels,
                                            const std::vector<double>& lambdas) {
  if (m_large < 2) throw InvalidTruncation("polaron_spectrum: m_large must be at least 2");
  if (n_levels > 2 * m_large * m_large)
    throw DimensionMismatch("polaron_spectrum: more levels requested than the truncated space holds");
  std::vector<SpectrumPoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const JunctionSpec s = spec.with_lambda(lambda).with_truncation(m_large);
    s.validate();
    const Operator u = polaron_unitary(s);
    if (u.is_real()) {
      // K is real antisymmetric for these couplings, so U is orthogonal
      const RealMatrix ur = u.matrix().real();
      const RealMatrix uh = ur * sparse_hamiltonian(s);
      RealMatrix transformed = detail::gemm_transposed(uh, ur);
      out.push_back({lambda, detail::lowest_eigenvalues(transformed, n_levels)});
    } else {
      const RCModel model = build_rc_model(s);
      out.push_back({lambda, herm_eigvals(similarity(u, model.h_s_rc), n_levels)});
    }
  }
  return out;
}

}  // namespace qjunction
