#pragma once

// Parameter sweeps over the junction: every point is an independent task run
// by a bounded worker pool; results land in an index-addressed table so the
// emitted rows never depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qjunction/config.hpp"
#include "qjunction/junction.hpp"
#include "qjunction/redfield.hpp"

namespace qjunction {

std::string library_version();

struct SweepRow {
  std::vector<double> values;
  /// "ok", a warning ("ill-conditioned", "fallback:...", "decoupled"), or a
  /// failure tag starting with "error:" or "skipped:".
  std::string status = "ok";
  double wall_time = 0.0;

  bool failed() const;
};

struct SweepResult {
  SweepConfig config;
  std::vector<std::string> columns;  // data columns, status and wall_time follow
  std::vector<SweepRow> rows;
  std::string report;

  std::size_t failures() const;
  /// One header line plus one line per row, 17 significant digits.
  std::string csv(bool with_wall_time = true) const;
  /// FNV-1a over the CSV without the wall_time column.
  std::uint64_t digest() const;
  /// Values of one named column.
  std::vector<double> column(const std::string& name) const;
};

/// Solves one RC point the way the sweeps do: iterative by default, dense
/// fallback for small ill-conditioned systems, zero current when a contact
/// is switched off.  Never throws for solver trouble; the row says what
/// happened.  Values: j_left, j_right, residual, min_eig.
SweepRow solve_point(const JunctionSpec& spec, const SweepConfig& cfg);

SweepResult run_sweep(const SweepConfig& cfg);
SweepResult run_single(const SweepConfig& cfg);
SweepResult run_angle_grid(const SweepConfig& cfg);
SweepResult run_lambda_scan(const SweepConfig& cfg);
SweepResult run_m_convergence(const SweepConfig& cfg);
SweepResult run_spectrum(const SweepConfig& cfg);
SweepResult run_effective_compare(const SweepConfig& cfg);
SweepResult run_rectification(const SweepConfig& cfg);

/// Writes `path` (CSV) and `path`.report.txt.
void write_outputs(const SweepResult& result, const std::string& path);

// Report helpers.  They read only the emitted rows, so every summary can be
// recomputed from the CSV.

/// Closed angle grid: n points from 0 to pi inclusive.
std::vector<double> angle_axis(std::size_t n);

struct AngleArgmax {
  bool found = false;
  double theta = 0.0;
  double phi = 0.0;
  double j = 0.0;
  /// |phi - theta - pi/2| reduced mod pi into [0, pi/2]: the phi offset to
  /// the nearest of the lines phi = theta +- pi/2 (mod pi).
  double line_offset = 0.0;
  /// Perpendicular distance to the same lines.
  double line_distance = 0.0;
};

AngleArgmax angle_argmax(const std::vector<double>& theta, const std::vector<double>& phi, const std::vector<double>& j);

struct Peak {
  bool found = false;
  std::size_t index = 0;  // discrete argmax
  bool interior = false;
  double x = 0.0;         // interpolated location
  double y = 0.0;         // interpolated value
  /// Strict local maxima of the sequence (endpoints excluded).
  std::size_t local_maxima = 0;
};

/// Discrete maximum refined by the parabola through it and its neighbours.
/// Non-finite samples are ignored.
Peak find_peak(const std::vector<double>& x, const std::vector<double>& y);

struct Approach {
  std::size_t lower_level = 0;  // 1-based, ground state is level 1
  double lambda = 0.0;
  double gap = 0.0;
};

/// Local minima of the gap between adjacent levels (1-based k and k + 1)
/// with value below `threshold`; a flat stretch counts once.
/// `energies[i]` holds the ascending levels at lambdas[i].
std::vector<Approach> level_approaches(const std::vector<double>& lambdas,
                                       const std::vector<std::vector<double>>& energies, double threshold);

/// |a - b| / |b|, zero when both vanish.
double relative_change(double a, double b);

}  // namespace qjunction
