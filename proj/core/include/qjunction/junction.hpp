#pragma once

// Physical description of the two-bath qubit junction and the scalar physics
// around it: spectral densities, Bose occupations, thermal transition rates
// and reaction-coordinate parameters from spectral moments.
//
// Units: hbar = k_B = 1 and the qubit half-splitting Delta = 1 sets the
// energy scale, so every temperature, frequency and coupling is in units of
// Delta.

#include <numbers>
#include <string>
#include <vector>

namespace qjunction {

enum class BathLabel { left, right };

std::string to_string(BathLabel label);

inline constexpr double kDefaultCutoff = 1000.0;
inline constexpr double kZeroFrequency = 1e-9;

struct BathSpec {
  BathLabel label = BathLabel::left;
  double temperature = 1.0;
  double omega = 8.0;                        // RC frequency / Brownian peak
  double gamma = 0.05 / std::numbers::pi;    // width / residual coupling
  double lambda = 0.1;                       // system-RC coupling
  double cutoff = kDefaultCutoff;            // Ohmic residual cutoff
  double angle = std::numbers::pi / 2;       // S = cos(angle) sz + sin(angle) sx

  /// Returns the violated invariants, empty when valid.
  std::vector<std::string> violations() const;

  bool operator==(const BathSpec&) const = default;
};

struct JunctionSpec {
  double delta = 1.0;
  BathSpec left{BathLabel::left, 2.0};
  BathSpec right{BathLabel::right, 1.0};
  std::size_t truncation = 6;

  std::vector<std::string> violations() const;
  /// Throws DomainError listing every violation.
  void validate() const;

  const BathSpec& bath(BathLabel label) const { return label == BathLabel::left ? left : right; }
  BathSpec& bath(BathLabel label) { return label == BathLabel::left ? left : right; }

  /// Same junction with lambda_L = lambda_R = lambda.
  JunctionSpec with_lambda(double lambda) const;
  JunctionSpec with_angles(double theta, double phi) const;
  JunctionSpec with_temperatures(double t_left, double t_right) const;
  JunctionSpec with_truncation(std::size_t m) const;

  bool operator==(const JunctionSpec&) const = default;
};

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double angle);

/// A bath spectral density J(omega) of one of the supported families.
class SpectralDensity {
 public:
  enum class Family { brownian, ohmic_rc, effective };

  /// 4 gamma Omega^2 lambda^2 w / [(w^2 - Omega^2)^2 + (2 pi gamma Omega w)^2]
  static SpectralDensity brownian(double omega, double gamma, double lambda);
  /// gamma w exp(-w / cutoff)
  static SpectralDensity ohmic_rc(double gamma, double cutoff);
  /// (4 lambda^2 / Omega^2) gamma w exp(-w / cutoff)
  static SpectralDensity effective(double lambda, double omega, double gamma, double cutoff);

  /// Same density multiplied by `factor`.
  SpectralDensity scaled(double factor) const;

  Family family() const noexcept { return family_; }
  double operator()(double w) const;
  /// lim_{w -> 0} J(w) / w
  double slope_at_zero() const;
  /// Characteristic frequency used to place quadrature breakpoints.
  double scale() const;

 private:
  Family family_ = Family::ohmic_rc;
  double omega_ = 1.0;
  double gamma_ = 0.0;
  double lambda_ = 0.0;
  double cutoff_ = kDefaultCutoff;
  double prefactor_ = 1.0;
};

double brownian_j(double w, const BathSpec& spec);
double ohmic_j_rc(double w, const BathSpec& spec);

/// 1 / (exp(w / T) - 1); throws DomainError unless w > 0 and T > 0.
double bose(double w, double temperature);

/// Half-Fourier transform of the bath correlation function for a density J:
/// pi J(|w|) n(|w|) for w < 0, pi J(w) [n(w) + 1] for w > 0 and
/// pi T lim J/w at |w| <= kZeroFrequency.
double thermal_rate(const SpectralDensity& j, double temperature, double w);

/// thermal_rate for the Ohmic residual density of a reaction-coordinate bath.
double gamma_rc(double w, const BathSpec& spec);

/// \int_0^\infty w^k J(w) dw by adaptive Gauss-Kronrod quadrature with
/// relative tolerance 1e-8 and a doubling upper limit until the last tail
/// slab contributes less than 1e-10 of the total.  Throws QuadratureFailure
/// when the moment does not converge.
double spectral_moment(const SpectralDensity& j, int k);

struct RCParameters {
  double lambda = 0.0;
  double omega = 0.0;
};

/// Reaction-coordinate frequency and coupling from the moments of J:
/// Omega^2 = M_1 / M_{-1}, lambda^2 = M_1 / Omega.
RCParameters rc_parameters_from_spectrum(const SpectralDensity& j);

}  // namespace qjunction
