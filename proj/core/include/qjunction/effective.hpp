#pragma once

// Effective Hamiltonian description of the junction: the polaron-dressed
// bare qubit, its dressing functions and the secular closed-form currents.
//
// Only three angle families have a dressing:
//   commuting                 theta = phi = pi/2
//   shifted                   phi - theta = +-pi/2 (mod 2 pi), delta = theta
//   dissipative-decoherence   shifted members with sin(2 delta) = 0, where
//                             one contact couples through sz only

#include <string>

#include "qjunction/junction.hpp"
#include "qjunction/operator.hpp"
#include "qjunction/redfield.hpp"

namespace qjunction {

/// F(y) = exp(-y^2) int_0^y exp(t^2) dt, odd in y.
double dawson(double y);

/// Series and asymptotic branches switch here.
inline constexpr double kDawsonCrossover = 6.0;

/// The two branches of dawson() for y > 0: the Maclaurin series (accurate
/// well past the crossover) and the optimally truncated asymptotic series.
double dawson_series(double y);
double dawson_asymptotic(double y);

/// exp(-4 x^2)
double dressing_commuting(double x);

/// 1 - sqrt(2) x F(sqrt(2) x).  Equals 1 at x = 0, dips to about 0.358 near
/// x = 1.06 and tends to 1/2 from below.
double dressing_shifted(double x);

enum class EffectiveFamily { commuting, shifted, dissipative_decoherence };

std::string to_string(EffectiveFamily family);

struct EffectiveJunction {
  EffectiveFamily family = EffectiveFamily::commuting;
  double delta_tilde = 1.0;
  /// Scalar dressing (exp(-4x^2) or f(x)).
  double dressing = 1.0;
  /// theta for the shifted families, pi/2 for the commuting one.
  double shift_angle = 0.0;
  Operator s_eff_left;
  Operator s_eff_right;
  SpectralDensity j_eff_left;
  SpectralDensity j_eff_right;
  BathSpec left;
  BathSpec right;
};

/// Classifies the angle pair.  Throws UnsupportedFamily outside the three
/// families and UnsupportedAsymmetry unless lambda/Omega agree on both sides.
EffectiveFamily classify_family(const JunctionSpec& spec);

EffectiveJunction build_effective_junction(const JunctionSpec& spec);

/// Nonsecular Redfield NESS of delta_tilde sz with the dressed couplings;
/// returns j_left.  Zero when both effective densities vanish.
double effective_current_numeric(const EffectiveJunction& eff, double t_left, double t_right);
NessResult effective_ness(const EffectiveJunction& eff, double t_left, double t_right);

/// Populations from the secular two-level rate equation of the effective
/// junction and the resulting left current.
double secular_current(const EffectiveJunction& eff, double t_left, double t_right);

/// Closed forms for lambda_L = lambda_R and Omega_L = Omega_R.
double analytic_current_commuting(const JunctionSpec& spec);
double analytic_current_shifted(const JunctionSpec& spec, double delta);

}  // namespace qjunction
