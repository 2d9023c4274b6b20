#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qjunction/error.hpp"
#include "qjunction/junction.hpp"

using namespace qjunction;
using std::numbers::pi;

namespace {

BathSpec brownian_bath(double omega, double lambda) {
  BathSpec b;
  b.omega = omega;
  b.lambda = lambda;
  b.gamma = 0.05 / pi;
  return b;
}

}  // namespace

TEST_CASE("brownian density") {
  const BathSpec b = brownian_bath(8.0, 1.0);
  CHECK(brownian_j(0.0, b) == 0.0);
  // at resonance: lambda^2 / (pi^2 gamma Omega)
  CHECK(brownian_j(8.0, b) == doctest::Approx(1.0 / (0.4 * pi)).epsilon(1e-14));
  CHECK(brownian_j(8.0, b) == doctest::Approx(0.79577).epsilon(1e-5));

  for (double w : {0.1, 1.0, 2.0, 7.5, 8.0, 20.0, 300.0})
    CHECK(brownian_j(w, b) == doctest::Approx(oracle::brownian(w, 8.0, b.gamma, 1.0)).epsilon(1e-14));
}

// The maximum of J is not at Omega itself: dJ/dw = 0 gives
// 3 u^2 - (2 Omega^2 - a^2) u - Omega^4 = 0 with u = w^2, a = 2 pi gamma Omega,
// which puts it about 0.01 below Omega here.  J(Omega - eps) > J(Omega) for
// eps < ~0.02, so the peak check runs against the true maximum.
TEST_CASE("brownian peak from a dense scan") {
  const BathSpec b = brownian_bath(8.0, 1.0);
  const double omega = 8.0, a = 2 * pi * b.gamma * omega;
  const double c = 2 * omega * omega - a * a;
  const double w_star = std::sqrt((c + std::sqrt(c * c + 12 * std::pow(omega, 4))) / 6.0);
  CHECK(std::abs(w_star - 7.99) < 1e-6);

  double best_w = 0.0, best = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double w = 6.0 + 4.0 * i / 400000.0;
    if (brownian_j(w, b) > best) {
      best = brownian_j(w, b);
      best_w = w;
    }
  }
  CHECK(std::abs(best_w - w_star) <= 1e-5);

  const double peak = brownian_j(w_star, b);
  for (double eps = 1e-3; eps <= 1.0; eps *= 1.5) {
    CHECK(brownian_j(w_star + eps, b) < peak);
    CHECK(brownian_j(w_star - eps, b) < peak);
    CHECK(brownian_j(omega + eps, b) < brownian_j(omega, b));
  }
  // outside the 0.02 sliver the statement about Omega holds on both sides
  for (double eps = 0.025; eps <= 1.0; eps *= 1.5) CHECK(brownian_j(omega - eps, b) < brownian_j(omega, b));
  CHECK(brownian_j(omega - 0.01, b) > brownian_j(omega, b));
}

TEST_CASE("ohmic residual density") {
  BathSpec b;
  b.gamma = 0.05 / pi;
  b.cutoff = 1000.0;
  CHECK(ohmic_j_rc(0.0, b) == 0.0);
  CHECK(ohmic_j_rc(1000.0, b) == doctest::Approx(b.gamma * 1000.0 / std::numbers::e).epsilon(1e-14));
  // maximum at the cutoff
  const double top = ohmic_j_rc(1000.0, b);
  for (double w : {500.0, 900.0, 999.0, 1001.0, 1100.0, 2000.0}) CHECK(ohmic_j_rc(w, b) < top);
}

TEST_CASE("bose occupation") {
  CHECK(bose(2.0, 2.0) == doctest::Approx(1.0 / (std::numbers::e - 1.0)).epsilon(1e-14));
  CHECK(bose(2.0, 2.0) == doctest::Approx(0.581977).epsilon(1e-6));
  CHECK(bose(2.0, 1.0) == doctest::Approx(0.156518).epsilon(1e-5));
  for (double t : {0.1, 0.5, 1.0, 2.0, 7.0})
    for (double w : {0.01, 0.3, 1.0, 2.0, 5.0}) {
      const double n = bose(w, t);
      CHECK(std::abs(n + 1.0 - std::exp(w / t) * n) <= 1e-12 * std::max(1.0, std::exp(w / t) * n));
    }
  CHECK_THROWS_AS(bose(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bose(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bose(1.0, 0.0), DomainError);
}

TEST_CASE("residual rates") {
  BathSpec b;
  b.gamma = 0.05 / pi;
  b.temperature = 2.0;
  CHECK(gamma_rc(0.0, b) == doctest::Approx(0.1).epsilon(1e-14));

  for (double w : {0.01, 0.5, 1.0, 2.0, 4.0, 16.0})
    CHECK(gamma_rc(w, b) / gamma_rc(-w, b) == doctest::Approx(std::exp(w / b.temperature)).epsilon(1e-10));

  // pi gamma w n(w) -> pi gamma T
  CHECK(std::abs(gamma_rc(1e-9, b) - gamma_rc(0.0, b)) <= 1e-6);
  CHECK(std::abs(gamma_rc(-1e-9, b) - gamma_rc(0.0, b)) <= 1e-6);
  CHECK(std::abs(gamma_rc(2e-9, b) - gamma_rc(0.0, b)) <= 1e-6);

  for (double w = -50.0; w <= 50.0; w += 0.37) CHECK(gamma_rc(w, b) > 0.0);

  // explicit branches
  const double w = 1.3;
  CHECK(gamma_rc(w, b) == doctest::Approx(pi * ohmic_j_rc(w, b) * (oracle::bose(w, 2.0) + 1.0)).epsilon(1e-13));
  CHECK(gamma_rc(-w, b) == doctest::Approx(pi * ohmic_j_rc(w, b) * oracle::bose(w, 2.0)).epsilon(1e-13));
}

TEST_CASE("reaction coordinate parameters from moments") {
  // The Brownian family maps onto (lambda, Omega) exactly; an mpmath
  // evaluation of M_1 and M_-1 to infinity returns the inputs to 30 digits.
  const double g = 0.05 / pi;
  const RCParameters p = rc_parameters_from_spectrum(SpectralDensity::brownian(8.0, g, 1.0));
  CHECK(std::abs(p.lambda - 1.0) <= 1e-2);
  CHECK(std::abs(p.omega - 8.0) <= 8e-2);
  CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.omega == doctest::Approx(8.0).epsilon(1e-6));

  const RCParameters p2 = rc_parameters_from_spectrum(SpectralDensity::brownian(8.0, g, 2.0));
  CHECK(p2.lambda / p.lambda == doctest::Approx(2.0).epsilon(1e-6));

  for (double om : {4.0, 16.0}) {
    const RCParameters q = rc_parameters_from_spectrum(SpectralDensity::brownian(om, g, 1.0));
    CHECK(std::abs(q.omega / om - 1.0) <= 1e-2);
  }

  for (double c : {0.25, 3.0}) {
    const RCParameters q = rc_parameters_from_spectrum(SpectralDensity::brownian(8.0, g, 1.0).scaled(c));
    CHECK(q.omega == doctest::Approx(p.omega).epsilon(1e-6));
    CHECK(q.lambda == doctest::Approx(p.lambda * std::sqrt(c)).epsilon(1e-6));
  }
}

TEST_CASE("spectral densities are nonnegative") {
  const double omega = 8.0;
  const SpectralDensity dens[] = {
      SpectralDensity::brownian(omega, 0.05 / pi, 1.0),
      SpectralDensity::ohmic_rc(0.05 / pi, 1000.0),
      SpectralDensity::effective(1.0, omega, 0.05 / pi, 1000.0),
  };
  for (const auto& j : dens)
    for (int i = 0; i <= 10000; ++i) {
      const double w = 50.0 * omega * i / 10000.0;
      CHECK(j(w) >= 0.0);
    }
}

TEST_CASE("spec validation") {
  JunctionSpec s;
  CHECK(s.violations().empty());
  s.left.temperature = -1.0;
  s.truncation = 1;
  const auto v = s.violations();
  CHECK(v.size() >= 2);
  CHECK_THROWS_AS(s.validate(), DomainError);

  CHECK(wrap_angle(-pi / 2) == doctest::Approx(3 * pi / 2));
  CHECK(wrap_angle(2 * pi) == doctest::Approx(0.0));
}
