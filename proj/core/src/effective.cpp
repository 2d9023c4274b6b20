#include "qjunction/effective.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qjunction/error.hpp"
#include "qjunction/rc_embedding.hpp"

namespace qjunction {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-9;

bool same_angle(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return d < kAngleTol || 2.0 * kPi - d < kAngleTol;
}

void require_symmetric(const JunctionSpec& spec, const char* who) {
  const double xl = spec.left.lambda / spec.left.omega;
  const double xr = spec.right.lambda / spec.right.omega;
  if (std::abs(spec.left.lambda - spec.right.lambda) > 1e-12 * std::max(1.0, spec.left.lambda) ||
      std::abs(spec.left.omega - spec.right.omega) > 1e-12 * std::max(1.0, spec.left.omega) ||
      std::abs(xl - xr) > 1e-12) {
    std::ostringstream os;
    os << who << ": needs lambda_L = lambda_R and Omega_L = Omega_R (got lambda " << spec.left.lambda << "/"
       << spec.right.lambda << ", Omega " << spec.left.omega << "/" << spec.right.omega << ")";
    throw UnsupportedAsymmetry(os.str());
  }
}

SpectralDensity effective_density(const BathSpec& b) {
  return SpectralDensity::effective(b.lambda, b.omega, b.gamma, b.cutoff);
}

double two_level_current(double delta_tilde, double up_l, double down_l, double up_r, double down_r) {
  const double total = up_l + down_l + up_r + down_r;
  if (total == 0.0) return 0.0;
  const double p_excited = (up_l + up_r) / total;
  const double p_ground = (down_l + down_r) / total;
  return 2.0 * delta_tilde * (up_l * p_ground - down_l * p_excited);
}

}  // namespace

double dawson_series(double y) {
  // exp(-y^2) sum_n y^(2n+1) / (n! (2n+1)); every term is positive
  const double y2 = y * y;
  double t = y;
  double sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double c = t / (2.0 * n + 1.0);
    sum += c;
    if (c < 1e-17 * sum) break;
    t *= y2 / (n + 1.0);
  }
  return std::exp(-y2) * sum;
}

double dawson_asymptotic(double y) {
  // 1/(2y) sum_n (2n-1)!! / (2y^2)^n, cut at its smallest term
  const double y2 = y * y;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 400; ++n) {
    const double next = term * (2.0 * n - 1.0) / (2.0 * y2);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (2.0 * y);
}

double dawson(double y) {
  if (std::isnan(y)) return y;
  if (y < 0.0) return -dawson(-y);
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return 0.0;
  return y <= kDawsonCrossover ? dawson_series(y) : dawson_asymptotic(y);
}

double dressing_commuting(double x) {
  if (!(x >= 0.0)) throw DomainError("dressing_commuting: requires x >= 0");
  return std::exp(-4.0 * x * x);
}

double dressing_shifted(double x) {
  if (!(x >= 0.0)) throw DomainError("dressing_shifted: requires x >= 0");
  const double y = std::numbers::sqrt2 * x;
  return 1.0 - y * dawson(y);
}

std::string to_string(EffectiveFamily family) {
  switch (family) {
    case EffectiveFamily::commuting:
      return "commuting";
    case EffectiveFamily::shifted:
      return "shifted";
    case EffectiveFamily::dissipative_decoherence:
      return "dissipative-decoherence";
  }
  return "?";
}

EffectiveFamily classify_family(const JunctionSpec& spec) {
  require_symmetric(spec, "build_effective_junction");
  const double theta = spec.left.angle;
  const double phi = spec.right.angle;
  if (same_angle(theta, kPi / 2) && same_angle(phi, kPi / 2)) return EffectiveFamily::commuting;
  if (same_angle(phi - theta, kPi / 2) || same_angle(phi - theta, -kPi / 2)) {
    return std::abs(std::sin(2.0 * theta)) < kAngleTol ? EffectiveFamily::dissipative_decoherence
                                                       : EffectiveFamily::shifted;
  }
  std::ostringstream os;
  os << "build_effective_junction: angles (" << theta << ", " << phi
     << ") are neither (pi/2, pi/2) nor a pi/2-shifted pair";
  throw UnsupportedFamily(os.str());
}

EffectiveJunction build_effective_junction(const JunctionSpec& spec) {
  spec.validate();
  EffectiveJunction eff;
  eff.family = classify_family(spec);
  eff.left = spec.left;
  eff.right = spec.right;
  eff.j_eff_left = effective_density(spec.left);
  eff.j_eff_right = effective_density(spec.right);
  const double x = spec.left.lambda / spec.left.omega;
  if (eff.family == EffectiveFamily::commuting) {
    eff.dressing = dressing_commuting(x);
    eff.shift_angle = kPi / 2;
    eff.s_eff_left = pauli(Pauli::x);
    eff.s_eff_right = pauli(Pauli::x);
  } else {
    eff.dressing = dressing_shifted(x);
    eff.shift_angle = spec.left.angle;
    eff.s_eff_left = eff.dressing * coupling_operator(spec.left.angle);
    eff.s_eff_right = eff.dressing * coupling_operator(spec.right.angle);
    eff.s_eff_left.mark_hermitian_if();
    eff.s_eff_right.mark_hermitian_if();
  }
  eff.delta_tilde = eff.dressing * spec.delta;
  return eff;
}

NessResult effective_ness(const EffectiveJunction& eff, double t_left, double t_right) {
  const Operator h = eff.delta_tilde * pauli(Pauli::z);
  const SpectralDensity jl = eff.j_eff_left;
  const SpectralDensity jr = eff.j_eff_right;
  std::vector<DissipatorSpec> baths{
      {eff.s_eff_left, [jl, t_left](double w) { return thermal_rate(jl, t_left, w); }, BathLabel::left},
      {eff.s_eff_right, [jr, t_right](double w) { return thermal_rate(jr, t_right, w); }, BathLabel::right},
  };
  return ness_solve(assemble_liouvillian(h, baths));
}

double effective_current_numeric(const EffectiveJunction& eff, double t_left, double t_right) {
  if (eff.j_eff_left.slope_at_zero() == 0.0 && eff.j_eff_right.slope_at_zero() == 0.0) return 0.0;
  return effective_ness(eff, t_left, t_right).j_left;
}

double secular_current(const EffectiveJunction& eff, double t_left, double t_right) {
  const double gap = 2.0 * eff.delta_tilde;
  // |<e|S|g>|^2 with e = spin up (index 0), g = spin down (index 1)
  const double ml = std::norm(eff.s_eff_left(0, 1));
  const double mr = std::norm(eff.s_eff_right(0, 1));
  const double up_l = 2.0 * ml * thermal_rate(eff.j_eff_left, t_left, -gap);
  const double down_l = 2.0 * ml * thermal_rate(eff.j_eff_left, t_left, gap);
  const double up_r = 2.0 * mr * thermal_rate(eff.j_eff_right, t_right, -gap);
  const double down_r = 2.0 * mr * thermal_rate(eff.j_eff_right, t_right, gap);
  return two_level_current(eff.delta_tilde, up_l, down_l, up_r, down_r);
}

double analytic_current_commuting(const JunctionSpec& spec) {
  require_symmetric(spec, "analytic_current_commuting");
  if (spec.left.lambda == 0.0) return 0.0;
  const double dt = spec.delta * dressing_commuting(spec.left.lambda / spec.left.omega);
  const double w = 2.0 * dt;
  const double jl = effective_density(spec.left)(w);
  const double jr = effective_density(spec.right)(w);
  const double nl = bose(w, spec.left.temperature);
  const double nr = bose(w, spec.right.temperature);
  return 4.0 * kPi * dt * jl * jr * (nl - nr) / (jl * (2.0 * nl + 1.0) + jr * (2.0 * nr + 1.0));
}

double analytic_current_shifted(const JunctionSpec& spec, double delta) {
  require_symmetric(spec, "analytic_current_shifted");
  if (spec.left.lambda == 0.0) return 0.0;
  // s^2 c^2 vanishes on the dissipative-decoherence members; cos(pi/2) is not
  // exactly zero in floating point
  if (std::abs(std::sin(2.0 * delta)) < kAngleTol) return 0.0;
  const double f = dressing_shifted(spec.left.lambda / spec.left.omega);
  const double dt = f * spec.delta;
  const double w = 2.0 * dt;
  const double jl = effective_density(spec.left)(w);
  const double jr = effective_density(spec.right)(w);
  const double nl = bose(w, spec.left.temperature);
  const double nr = bose(w, spec.right.temperature);
  const double s2 = std::sin(delta) * std::sin(delta);
  const double c2 = std::cos(delta) * std::cos(delta);
  const double f2 = f * f;
  const double den = s2 * f2 * jl * (2.0 * nl + 1.0) + c2 * f2 * jr * (2.0 * nr + 1.0);
  if (den == 0.0) return 0.0;
  return 4.0 * kPi * dt * s2 * c2 * f2 * f2 * jl * jr * (nl - nr) / den;
}

}  // namespace qjunction
