#pragma once

// Reaction-coordinate embedding of the two-bath qubit junction.
//
// The extended system lives on qubit (x) RC_L (x) RC_R, in that order, with
// each reaction coordinate truncated to M Fock levels:
//
//   H = Delta sz + sum_a [ Omega_a n_a + lambda_a S(angle_a) x_a ],
//   x_a = a_a + a_a^dagger,  S(angle) = cos(angle) sz + sin(angle) sx.
//
// The residual baths couple to x_L and x_R with Ohmic spectral densities.

#include <cstddef>
#include <vector>

#include "qjunction/junction.hpp"
#include "qjunction/operator.hpp"

namespace qjunction {

/// cos(angle) sz + sin(angle) sx
Operator coupling_operator(double angle);

struct RCModel {
  Operator h_s_rc;
  Operator s_res_left;
  Operator s_res_right;
  JunctionSpec spec;

  std::size_t dim() const noexcept { return h_s_rc.dim(); }
  const Operator& s_res(BathLabel label) const { return label == BathLabel::left ? s_res_left : s_res_right; }
};

RCModel build_rc_model(const JunctionSpec& spec);

/// Generator K = sum_a (lambda_a / Omega_a) S_a (x) (a_a^dagger - a_a), embedded
/// in the extended space of `spec` at its truncation.
Operator polaron_generator(const JunctionSpec& spec);

/// exp(K) for the polaron generator.  The two RC momentum quadratures are
/// diagonalized separately, which reduces the exponential to independent
/// 2x2 qubit rotations; the result equals unitary_exp(polaron_generator(spec))
/// in the same truncated space.
Operator polaron_unitary(const JunctionSpec& spec);

struct SpectrumPoint {
  double lambda = 0.0;
  RealVector energies;  // lowest levels, ascending
};

/// Lowest `n_levels` eigenvalues of U H U^dagger for each lambda in `lambdas`
/// (lambda_L = lambda_R), with both reaction coordinates truncated to m_large.
std::vector<SpectrumPoint> polaron_spectrum(const JunctionSpec& spec, std::size_t m_large, std::size_t n_levels,
                                            const std::vector<double>& lambdas);

}  // namespace qjunction
