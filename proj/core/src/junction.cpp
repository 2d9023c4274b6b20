#include "qjunction/junction.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qjunction/error.hpp"

namespace qjunction {

namespace {

constexpr double kPi = std::numbers::pi;

void check_positive(std::vector<std::string>& out, const std::string& name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be > 0 (got " << v << ")";
    out.push_back(os.str());
  }
}

}  // namespace

std::string to_string(BathLabel label) { return label == BathLabel::left ? "L" : "R"; }

double wrap_angle(double angle) {
  double a = std::fmod(angle, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

std::vector<std::string> BathSpec::violations() const {
  std::vector<std::string> out;
  const std::string p = to_string(label) == "L" ? "left." : "right.";
  check_positive(out, p + "temperature", temperature);
  check_positive(out, p + "omega", omega);
  check_positive(out, p + "gamma", gamma);
  check_positive(out, p + "cutoff", cutoff);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    std::ostringstream os;
    os << p << "lambda must be >= 0 (got " << lambda << ")";
    out.push_back(os.str());
  }
  if (!(angle >= 0.0 && angle < 2.0 * kPi)) {
    std::ostringstream os;
    os << p << "angle must lie in [0, 2pi) (got " << angle << ")";
    out.push_back(os.str());
  }
  return out;
}

std::vector<std::string> JunctionSpec::violations() const {
  std::vector<std::string> out;
  check_positive(out, "delta", delta);
  if (truncation < 2) out.push_back("truncation must be >= 2 (got " + std::to_string(truncation) + ")");
  if (left.label != BathLabel::left) out.push_back("left bath carries label R");
  if (right.label != BathLabel::right) out.push_back("right bath carries label L");
  for (auto& v : left.violations()) out.push_back(v);
  for (auto& v : right.violations()) out.push_back(v);
  return out;
}

void JunctionSpec::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid junction:";
  for (const auto& s : v) msg += "\n  " + s;
  throw DomainError(msg);
}

JunctionSpec JunctionSpec::with_lambda(double lambda) const {
  JunctionSpec s = *this;
  s.left.lambda = lambda;
  s.right.lambda = lambda;
  return s;
}

JunctionSpec JunctionSpec::with_angles(double theta, double phi) const {
  JunctionSpec s = *this;
  s.left.angle = wrap_angle(theta);
  s.right.angle = wrap_angle(phi);
  return s;
}

JunctionSpec JunctionSpec::with_temperatures(double t_left, double t_right) const {
  JunctionSpec s = *this;
  s.left.temperature = t_left;
  s.right.temperature = t_right;
  return s;
}

JunctionSpec JunctionSpec::with_truncation(std::size_t m) const {
  JunctionSpec s = *this;
  s.truncation = m;
  return s;
}

// ---------------------------------------------------------------------------
// Spectral densities

SpectralDensity SpectralDensity::brownian(double omega, double gamma, double lambda) {
  SpectralDensity j;
  j.family_ = Family::brownian;
  j.omega_ = omega;
  j.gamma_ = gamma;
  j.lambda_ = lambda;
  return j;
}

SpectralDensity SpectralDensity::ohmic_rc(double gamma, double cutoff) {
  SpectralDensity j;
  j.family_ = Family::ohmic_rc;
  j.gamma_ = gamma;
  j.cutoff_ = cutoff;
  return j;
}

SpectralDensity SpectralDensity::effective(double lambda, double omega, double gamma, double cutoff) {
  SpectralDensity j;
  j.family_ = Family::effective;
  j.lambda_ = lambda;
  j.omega_ = omega;
  j.gamma_ = gamma;
  j.cutoff_ = cutoff;
  return j;
}

SpectralDensity SpectralDensity::scaled(double factor) const {
  SpectralDensity j = *this;
  j.prefactor_ *= factor;
  return j;
}

double SpectralDensity::operator()(double w) const {
  switch (family_) {
    case Family::brownian: {
      const double o2 = omega_ * omega_;
      const double d = w * w - o2;
      const double width = 2.0 * kPi * gamma_ * omega_ * w;
      return prefactor_ * 4.0 * gamma_ * o2 * lambda_ * lambda_ * w / (d * d + width * width);
    }
    case Family::ohmic_rc:
      return prefactor_ * gamma_ * w * std::exp(-w / cutoff_);
    case Family::effective:
      return prefactor_ * 4.0 * lambda_ * lambda_ / (omega_ * omega_) * gamma_ * w * std::exp(-w / cutoff_);
  }
  return 0.0;
}

double SpectralDensity::slope_at_zero() const {
  switch (family_) {
    case Family::brownian:
      return prefactor_ * 4.0 * gamma_ * lambda_ * lambda_ / (omega_ * omega_);
    case Family::ohmic_rc:
      return prefactor_ * gamma_;
    case Family::effective:
      return prefactor_ * 4.0 * lambda_ * lambda_ / (omega_ * omega_) * gamma_;
  }
  return 0.0;
}

double SpectralDensity::scale() const { return family_ == Family::brownian ? omega_ : cutoff_; }

double brownian_j(double w, const BathSpec& spec) {
  return SpectralDensity::brownian(spec.omega, spec.gamma, spec.lambda)(w);
}

double ohmic_j_rc(double w, const BathSpec& spec) { return SpectralDensity::ohmic_rc(spec.gamma, spec.cutoff)(w); }

double bose(double w, double temperature) {
  if (!(w > 0.0) || !(temperature > 0.0)) {
    std::ostringstream os;
    os << "bose: requires w > 0 and T > 0 (got w = " << w << ", T = " << temperature << ")";
    throw DomainError(os.str());
  }
  return 1.0 / std::expm1(w / temperature);
}

double thermal_rate(const SpectralDensity& j, double temperature, double w) {
  if (std::abs(w) <= kZeroFrequency) return kPi * j.slope_at_zero() * temperature;
  const double aw = std::abs(w);
  const double n = bose(aw, temperature);
  return w < 0.0 ? kPi * j(aw) * n : kPi * j(aw) * (n + 1.0);
}

double gamma_rc(double w, const BathSpec& spec) {
  return thermal_rate(SpectralDensity::ohmic_rc(spec.gamma, spec.cutoff), spec.temperature, w);
}

// ---------------------------------------------------------------------------
// Moments

double spectral_moment(const SpectralDensity& j, int k) {
  constexpr double kRelTol = 1e-8;
  constexpr double kTailTol = 1e-10;
  constexpr int kMaxDoublings = 80;
  constexpr unsigned kMaxDepth = 30;

  const auto integrand = [&](double w) { return w > 0.0 ? std::pow(w, k) * j(w) : 0.0; };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

  double worst = 0.0;
  const auto slab = [&](double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = GK::integrate(integrand, a, b, kMaxDepth, kRelTol, &err, &l1);
    if (l1 > 0.0) worst = std::max(worst, err / l1);
    return v;
  };

  const double s = j.scale();
  double total = slab(0.0, s) + slab(s, 2.0 * s);
  double upper = 2.0 * s;
  double tail_ratio = 1.0;
  for (int it = 0; it < kMaxDoublings; ++it) {
    const double tail = slab(upper, 2.0 * upper);
    total += tail;
    upper *= 2.0;
    tail_ratio = std::abs(tail) / std::max(std::abs(total), 1e-300);
    if (tail_ratio <= kTailTol) {
      if (worst > 10.0 * kRelTol) {
        throw QuadratureFailure("spectral_moment: local quadrature did not reach tolerance", worst);
      }
      return total;
    }
  }
  std::ostringstream os;
  os << "spectral_moment: moment of order " << k << " does not converge (tail/total = " << tail_ratio
     << " at upper limit " << upper << ")";
  throw QuadratureFailure(os.str(), tail_ratio);
}

RCParameters rc_parameters_from_spectrum(const SpectralDensity& j) {
  const double m1 = spectral_moment(j, 1);
  const double m_1 = spectral_moment(j, -1);
  RCParameters p;
  p.omega = std::sqrt(m1 / m_1);
  p.lambda = std::sqrt(m1 / p.omega);
  return p;
}

}  // namespace qjunction
