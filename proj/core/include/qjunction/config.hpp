#pragma once

// Run configuration for the sweep driver.
//
// The file is JSON.  Every key is optional except "mode"; energies are in
// units of Delta.  Schema (defaults in brackets):
//
//   mode            single | angle-grid | lambda-scan | m-convergence |
//                   spectrum | effective-compare | rectification
//   delta [1]       truncation [6]
//   lambda          sets lambda on both baths (bath sections may override)
//   theta, phi      coupling angles of the left/right contact
//   left, right     bath sections: temperature [2 / 1], omega [8],
//                   gamma [0.05/pi], lambda [0.1], cutoff [1000], angle [pi/2]
//   angle_grid      { n_theta [21], n_phi [21] }
//   lambdas         explicit list, or
//   lambda_grid     { start [0.1], stop [40], count [40], spacing [log|linear] }
//   truncations     [3, 4, 5, 6]
//   spectrum        { m_large [40], levels [10], threshold [0.1], lambdas }
//   solver          { method [iterative|automatic|hermitian-dense|complex-dense],
//                     tolerance [1e-14], restart [80], max_iterations [4000] }
//   max_dimension   [512]   points with 2 M^2 above this are skipped
//   output          [qjunction.csv]
//   workers         [1]

#include <cstddef>
#include <string>
#include <vector>

#include "qjunction/error.hpp"
#include "qjunction/junction.hpp"
#include "qjunction/redfield.hpp"

namespace qjunction {

enum class SweepMode { single, angle_grid, lambda_scan, m_convergence, spectrum, effective_compare, rectification };

std::string to_string(SweepMode mode);
/// Throws ConfigError for an unknown name.
SweepMode parse_mode(const std::string& name);

/// Bad config file, bad override or violated config invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SweepConfig {
  SweepMode mode = SweepMode::single;
  JunctionSpec base;

  std::size_t n_theta = 21;
  std::size_t n_phi = 21;
  std::vector<double> lambdas;
  std::vector<std::size_t> truncations{3, 4, 5, 6};

  std::size_t m_large = 40;
  std::size_t levels = 10;
  double crossing_threshold = 0.1;
  std::vector<double> spectrum_lambdas;

  NessMethod method = NessMethod::iterative;
  double tolerance = 1e-14;
  std::size_t restart = 80;
  std::size_t max_iterations = 4000;

  std::size_t max_dimension = 512;
  std::string output = "qjunction.csv";
  std::size_t workers = 1;

  NessOptions ness_options() const;
  /// Empty when every invariant holds.
  std::vector<std::string> violations() const;

  bool operator==(const SweepConfig&) const = default;
};

/// n points from start to stop inclusive, geometric when `log` is set.
std::vector<double> make_grid(double start, double stop, std::size_t count, bool log);

/// Parses and validates; ConfigError carries line/column or field names.
SweepConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
SweepConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Fully resolved config as JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SweepConfig& cfg);

}  // namespace qjunction
