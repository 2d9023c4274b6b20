#include "qjunction/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <numbers>
#include <sstream>
#include <thread>

#include "qjunction/effective.hpp"
#include "qjunction/error.hpp"
#include "qjunction/rc_embedding.hpp"
#include "qjunction/transport.hpp"

#ifndef QJUNCTION_VERSION
#define QJUNCTION_VERSION "unknown"
#endif

namespace qjunction {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Hermitian-coordinate LU stays cheap up to here (d^2 = 5184).
constexpr std::size_t kDenseFallbackDim = 72;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string error_tag(const std::exception& e) {
  if (dynamic_cast<const NonuniqueSteadyState*>(&e)) return "error:nonunique-steady-state";
  if (dynamic_cast<const SingularSystem*>(&e)) return "error:singular-system";
  if (dynamic_cast<const ConvergenceFailure*>(&e)) return "error:convergence";
  if (dynamic_cast<const QuadratureFailure*>(&e)) return "error:quadrature";
  if (dynamic_cast<const StiffnessError*>(&e)) return "error:stiffness";
  if (dynamic_cast<const HermiticityViolation*>(&e)) return "error:hermiticity";
  if (dynamic_cast<const DomainError*>(&e)) return "error:domain";
  if (dynamic_cast<const std::bad_alloc*>(&e)) return "error:out-of-memory";
  return "error:solver";
}

void add_status(std::string& status, const std::string& tag) {
  status = status == "ok" ? tag : status + ";" + tag;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.  Tasks pull indices
// from a shared counter and write only their own slot.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  workers = std::min(workers, n);
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

SweepResult start(const SweepConfig& cfg, std::vector<std::string> columns) {
  SweepResult r;
  r.config = cfg;
  r.columns = std::move(columns);
  return r;
}

// Common head of every report.
std::ostringstream report_head(const SweepResult& r) {
  std::ostringstream os;
  os << "qjunction " << library_version() << "\n";
  os << "mode " << to_string(r.config.mode) << "\n";
  std::size_t warnings = 0;
  for (const auto& row : r.rows)
    if (!row.failed() && row.status != "ok") ++warnings;
  os << "rows " << r.rows.size() << ", failed " << r.failures() << ", with warnings " << warnings << "\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    if (r.rows[i].failed()) os << "  row " << i << ": " << r.rows[i].status << "\n";
  return os;
}

void report_tail(std::ostringstream& os, const SweepResult& r) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.digest()));
  os << "csv digest (fnv1a-64, wall_time excluded) " << hex << "\n";
  os << "resolved config:\n" << serialize_config(r.config);
}

// Usable rows of a two-column relation.
void usable(const SweepResult& r, const std::string& xs, const std::string& ys, std::vector<double>& x,
            std::vector<double>& y) {
  const auto cx = r.column(xs);
  const auto cy = r.column(ys);
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (r.rows[i].failed()) continue;
    x.push_back(cx[i]);
    y.push_back(cy[i]);
  }
}

}  // namespace

std::string library_version() { return QJUNCTION_VERSION; }

bool SweepRow::failed() const { return status.rfind("error:", 0) == 0 || status.rfind("skipped:", 0) == 0; }

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed(); }));
}

std::string SweepResult::csv(bool with_wall_time) const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += columns[c] + ",";
  out += with_wall_time ? "status,wall_time\n" : "status\n";
  for (const auto& row : rows) {
    for (double v : row.values) out += fmt(v) + ",";
    out += row.status;
    if (with_wall_time) out += "," + fmt(row.wall_time);
    out += "\n";
  }
  return out;
}

std::uint64_t SweepResult::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : csv(false)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> SweepResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw UnknownLabel("SweepResult: no column " + name);
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(c < row.values.size() ? row.values[c] : kNaN);
  return out;
}

SweepRow solve_point(const JunctionSpec& spec, const SweepConfig& cfg) {
  const auto t0 = Clock::now();
  SweepRow row;
  row.values.assign(4, kNaN);
  const std::size_t d = 2 * spec.truncation * spec.truncation;
  if (d > cfg.max_dimension) {
    row.status = "skipped:dimension-cap";
    return row;
  }
  // A switched-off contact leaves each bath in equilibrium with its own
  // part of the system, and the NESS is then not unique.
  if (spec.left.lambda == 0.0 || spec.right.lambda == 0.0) {
    row.values = {0.0, 0.0, 0.0, kNaN};
    row.status = "decoupled";
    row.wall_time = seconds_since(t0);
    return row;
  }
  try {
    const NessOptions options = cfg.ness_options();
    AssemblyOptions assembly;
    assembly.dense_limit = options.method == NessMethod::iterative ? 0 : std::max(assembly.dense_limit, d);
    NessResult r = rc_ness(spec, options, assembly);
    if (r.ill_conditioned && options.method == NessMethod::iterative && d <= kDenseFallbackDim) {
      NessOptions dense = options;
      dense.method = NessMethod::hermitian_dense;
      NessResult alt = rc_ness(spec, dense, AssemblyOptions{});
      if (alt.residual < r.residual) {
        r = std::move(alt);
        add_status(row.status, "fallback:hermitian-dense");
      }
    }
    row.values = {r.j_left, r.j_right, r.residual, r.min_eigenvalue};
    if (r.ill_conditioned) add_status(row.status, "ill-conditioned");
  } catch (const std::exception& e) {
    row.status = error_tag(e);
  }
  row.wall_time = seconds_since(t0);
  return row;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  switch (cfg.mode) {
    case SweepMode::single:
      return run_single(cfg);
    case SweepMode::angle_grid:
      return run_angle_grid(cfg);
    case SweepMode::lambda_scan:
      return run_lambda_scan(cfg);
    case SweepMode::m_convergence:
      return run_m_convergence(cfg);
    case SweepMode::spectrum:
      return run_spectrum(cfg);
    case SweepMode::effective_compare:
      return run_effective_compare(cfg);
    case SweepMode::rectification:
      return run_rectification(cfg);
  }
  throw ConfigError("run_sweep: unknown mode");
}

SweepResult run_single(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"theta", "phi", "lambda_left", "lambda_right", "t_left", "t_right", "truncation",
                              "j_left", "j_right", "residual", "min_eig"});
  const JunctionSpec& s = cfg.base;
  SweepRow row = solve_point(s, cfg);
  row.values.insert(row.values.begin(), {s.left.angle, s.right.angle, s.left.lambda, s.right.lambda,
                                         s.left.temperature, s.right.temperature,
                                         static_cast<double>(s.truncation)});
  r.rows.push_back(std::move(row));

  std::ostringstream os = report_head(r);
  const auto& v = r.rows[0].values;
  os << "j_left " << fmt(v[7]) << "\nj_right " << fmt(v[8]) << "\nconservation |j_L + j_R| "
     << fmt(std::abs(v[7] + v[8])) << "\nresidual " << fmt(v[9]) << "\nmin_eig " << fmt(v[10]) << "\n";
  report_tail(os, r);
  r.report = os.str();
  return r;
}

std::vector<double> angle_axis(std::size_t n) {
  if (n == 1) return {0.0};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = kPi * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

AngleArgmax angle_argmax(const std::vector<double>& theta, const std::vector<double>& phi,
                         const std::vector<double>& j) {
  AngleArgmax a;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!std::isfinite(j[i])) continue;
    if (!a.found || j[i] > a.j) {
      a.found = true;
      a.j = j[i];
      a.theta = theta[i];
      a.phi = phi[i];
    }
  }
  if (a.found) {
    // phi - theta - pi/2 folded into [-pi/2, pi/2]
    double off = std::fmod(a.phi - a.theta - kPi / 2, kPi);
    if (off > kPi / 2) off -= kPi;
    if (off < -kPi / 2) off += kPi;
    a.line_offset = std::abs(off);
    a.line_distance = a.line_offset / std::numbers::sqrt2;
  }
  return a;
}

SweepResult run_angle_grid(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"theta", "phi", "j_left", "j_right", "residual", "min_eig"});
  const auto th = angle_axis(cfg.n_theta);
  const auto ph = angle_axis(cfg.n_phi);
  r.rows.resize(th.size() * ph.size());
  parallel_for(r.rows.size(), cfg.workers, [&](std::size_t k) {
    const double t = th[k / ph.size()], p = ph[k % ph.size()];
    SweepRow row = solve_point(cfg.base.with_angles(t, p), cfg);
    row.values.insert(row.values.begin(), {t, p});
    r.rows[k] = std::move(row);
  });

  std::ostringstream os = report_head(r);
  os << "grid " << th.size() << " x " << ph.size() << " over [0, pi] x [0, pi], lambda " << fmt(cfg.base.left.lambda)
     << ", M " << cfg.base.truncation << "\n";
  std::vector<double> tt, pp, jj;
  const auto ct = r.column("theta"), cp = r.column("phi"), cj = r.column("j_left");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (r.rows[i].failed()) continue;
    tt.push_back(ct[i]);
    pp.push_back(cp[i]);
    jj.push_back(cj[i]);
  }
  const AngleArgmax a = angle_argmax(tt, pp, jj);
  if (a.found) {
    const double step = ph.size() > 1 ? kPi / static_cast<double>(ph.size() - 1) : kPi;
    os << "argmax theta " << fmt(a.theta) << " phi " << fmt(a.phi) << " j " << fmt(a.j) << "\n";
    os << "argmax offset to phi = theta +- pi/2 (mod pi): " << fmt(a.line_offset) << " (" << fmt(a.line_offset / step)
       << " grid steps), perpendicular distance " << fmt(a.line_distance) << "\n";
    for (std::size_t i = 0; i < tt.size(); ++i)
      if (std::abs(tt[i] - kPi / 2) < 1e-12 && std::abs(pp[i] - kPi / 2) < 1e-12)
        os << "j(pi/2, pi/2) / max " << fmt(jj[i] / a.j) << "\n";
  } else {
    os << "argmax none (no usable rows)\n";
  }
  report_tail(os, r);
  r.report = os.str();
  return r;
}

Peak find_peak(const std::vector<double>& x, const std::vector<double>& y) {
  Peak p;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  if (ys.empty()) return p;
  p.found = true;
  p.index = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  p.x = xs[p.index];
  p.y = ys[p.index];
  for (std::size_t i = 1; i + 1 < ys.size(); ++i)
    if (ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) ++p.local_maxima;
  p.interior = p.index > 0 && p.index + 1 < ys.size();
  if (!p.interior) return p;
  const double x0 = xs[p.index - 1], x1 = xs[p.index], x2 = xs[p.index + 1];
  const double y0 = ys[p.index - 1], y1 = ys[p.index], y2 = ys[p.index + 1];
  const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / den;
  if (a < 0.0) {
    const double xv = -b / (2.0 * a);
    if (xv >= x0 && xv <= x2) {
      p.x = xv;
      p.y = c - b * b / (4.0 * a);
    }
  }
  return p;
}

SweepResult run_lambda_scan(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"lambda", "j_left", "j_right", "residual", "min_eig"});
  r.rows.resize(cfg.lambdas.size());
  parallel_for(r.rows.size(), cfg.workers, [&](std::size_t k) {
    SweepRow row = solve_point(cfg.base.with_lambda(cfg.lambdas[k]), cfg);
    row.values.insert(row.values.begin(), cfg.lambdas[k]);
    r.rows[k] = std::move(row);
  });

  std::ostringstream os = report_head(r);
  os << "angles theta " << fmt(cfg.base.left.angle) << " phi " << fmt(cfg.base.right.angle) << ", M "
     << cfg.base.truncation << ", T " << fmt(cfg.base.left.temperature) << " / " << fmt(cfg.base.right.temperature)
     << "\n";
  std::vector<double> x, y;
  usable(r, "lambda", "j_left", x, y);
  const Peak p = find_peak(x, y);
  if (p.found) {
    os << "discrete max lambda " << fmt(x[p.index]) << " j " << fmt(y[p.index]) << "\n";
    os << "peak lambda* " << fmt(p.x) << " j* " << fmt(p.y) << (p.interior ? " (interpolated)" : " (at scan edge)")
       << "\n";
    os << "interior local maxima " << p.local_maxima << "\n";
    if (cfg.base.left.omega > 0) os << "lambda* / Omega " << fmt(p.x / cfg.base.left.omega) << "\n";
  } else {
    os << "peak none (no usable rows)\n";
  }
  report_tail(os, r);
  r.report = os.str();
  return r;
}

double relative_change(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::abs(b);
}

SweepResult run_m_convergence(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"lambda", "truncation", "j_left", "j_right", "residual", "min_eig"});
  const std::size_t nm = cfg.truncations.size();
  r.rows.resize(cfg.lambdas.size() * nm);
  parallel_for(r.rows.size(), cfg.workers, [&](std::size_t k) {
    const double lam = cfg.lambdas[k / nm];
    const std::size_t m = cfg.truncations[k % nm];
    SweepRow row = solve_point(cfg.base.with_lambda(lam).with_truncation(m), cfg);
    row.values.insert(row.values.begin(), {lam, static_cast<double>(m)});
    r.rows[k] = std::move(row);
  });

  std::ostringstream os = report_head(r);
  os << "angles theta " << fmt(cfg.base.left.angle) << " phi " << fmt(cfg.base.right.angle) << "\n";
  const auto cj = r.column("j_left");
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    os << "lambda " << fmt(cfg.lambdas[li]) << "\n";
    double last = kNaN;
    bool shrinking = true;
    std::size_t deltas = 0;
    for (std::size_t mi = 0; mi + 1 < nm; ++mi) {
      const SweepRow& a = r.rows[li * nm + mi];
      const SweepRow& b = r.rows[li * nm + mi + 1];
      if (a.failed() || b.failed()) {
        os << "  M " << cfg.truncations[mi] << " -> " << cfg.truncations[mi + 1] << " unavailable\n";
        continue;
      }
      const double rel = relative_change(cj[li * nm + mi + 1], cj[li * nm + mi]);
      os << "  M " << cfg.truncations[mi] << " -> " << cfg.truncations[mi + 1] << " relative change " << fmt(rel)
         << "\n";
      if (deltas > 0 && !(rel < last)) shrinking = false;
      last = rel;
      ++deltas;
    }
    if (deltas == 0)
      os << "  no deltas\n";
    else
      os << "  changes shrink monotonically: " << (shrinking ? "yes" : "no") << "\n";
  }
  report_tail(os, r);
  r.report = os.str();
  return r;
}

std::vector<Approach> level_approaches(const std::vector<double>& lambdas,
                                       const std::vector<std::vector<double>>& energies, double threshold) {
  std::vector<Approach> out;
  std::size_t levels = std::numeric_limits<std::size_t>::max();
  for (const auto& e : energies) levels = std::min(levels, e.size());
  if (energies.empty() || levels < 2) return out;
  const std::size_t n = energies.size();
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = energies[i][k + 1] - energies[i][k];
    for (std::size_t i = 0; i < n; ++i) {
      // flat stretches: only their first point is considered
      if (i > 0 && g[i] == g[i - 1]) continue;
      std::size_t end = i;
      while (end + 1 < n && g[end + 1] == g[i]) ++end;
      const bool left_ok = i == 0 || g[i] < g[i - 1];
      const bool right_ok = end + 1 == n || g[i] < g[end + 1];
      if (left_ok && right_ok && g[i] < threshold) out.push_back({k + 1, lambdas[i], g[i]});
    }
  }
  return out;
}

SweepResult run_spectrum(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"lambda", "level_index", "energy"});
  const std::size_t n = cfg.spectrum_lambdas.size();
  std::vector<std::vector<SweepRow>> blocks(n);
  parallel_for(n, cfg.workers, [&](std::size_t k) {
    const double lam = cfg.spectrum_lambdas[k];
    const auto t0 = Clock::now();
    try {
      const auto sp = polaron_spectrum(cfg.base, cfg.m_large, cfg.levels, {lam});
      const double wall = seconds_since(t0);
      const RealVector& e = sp.front().energies;
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        SweepRow row;
        row.values = {lam, static_cast<double>(i + 1), e[i]};
        row.wall_time = wall;
        blocks[k].push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      SweepRow row;
      row.values = {lam, kNaN, kNaN};
      row.status = error_tag(e);
      row.wall_time = seconds_since(t0);
      blocks[k].push_back(std::move(row));
    }
  });
  for (auto& b : blocks)
    for (auto& row : b) r.rows.push_back(std::move(row));

  std::ostringstream os = report_head(r);
  os << "angles theta " << fmt(cfg.base.left.angle) << " phi " << fmt(cfg.base.right.angle) << ", m_large "
     << cfg.m_large << ", levels " << cfg.levels << " (level 1 is the ground state)\n";
  std::vector<double> lams;
  std::vector<std::vector<double>> energies;
  for (std::size_t k = 0; k < n; ++k) {
    if (blocks[k].empty() || blocks[k].front().failed()) continue;
    lams.push_back(cfg.spectrum_lambdas[k]);
    energies.emplace_back();
    for (const auto& row : r.rows)
      if (!row.failed() && row.values[0] == cfg.spectrum_lambdas[k]) energies.back().push_back(row.values[2]);
  }
  const auto approaches = level_approaches(lams, energies, cfg.crossing_threshold);
  os << "approaches below " << fmt(cfg.crossing_threshold) << ": " << approaches.size() << "\n";
  for (std::size_t k = 1; k < cfg.levels; ++k) {
    std::size_t count = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& e : energies)
      if (e.size() > k) min_gap = std::min(min_gap, e[k] - e[k - 1]);
    for (const auto& a : approaches)
      if (a.lower_level == k) ++count;
    os << "  levels " << k << "-" << k + 1 << ": " << count << " approaches, smallest gap " << fmt(min_gap) << "\n";
  }
  for (const auto& a : approaches)
    os << "  approach levels " << a.lower_level << "-" << a.lower_level + 1 << " at lambda " << fmt(a.lambda)
       << " gap " << fmt(a.gap) << "\n";
  report_tail(os, r);
  r.report = os.str();
  return r;
}

SweepResult run_effective_compare(const SweepConfig& cfg) {
  // family and symmetry problems end the whole run
  const EffectiveFamily family = classify_family(cfg.base);
  SweepResult r = start(cfg, {"lambda", "j_rc", "j_effective_numeric", "j_effective_analytic", "rel_dev"});
  r.rows.resize(cfg.lambdas.size());
  const double tl = cfg.base.left.temperature, tr = cfg.base.right.temperature;
  parallel_for(r.rows.size(), cfg.workers, [&](std::size_t k) {
    const double lam = cfg.lambdas[k];
    const JunctionSpec s = cfg.base.with_lambda(lam);
    SweepRow row = solve_point(s, cfg);
    const double j_rc = row.values[0];
    double j_num = kNaN, j_an = kNaN;
    try {
      j_num = effective_current_numeric(build_effective_junction(s), tl, tr);
      j_an = family == EffectiveFamily::commuting ? analytic_current_commuting(s)
                                                  : analytic_current_shifted(s, s.left.angle);
    } catch (const std::exception& e) {
      add_status(row.status, "effective-" + error_tag(e));
    }
    row.values = {lam, j_rc, j_num, j_an, relative_change(j_num, j_rc)};
    if (std::isnan(j_rc) || std::isnan(j_num)) row.values[4] = kNaN;
    r.rows[k] = std::move(row);
  });

  std::ostringstream os = report_head(r);
  os << "family " << to_string(family) << ", T " << fmt(tl) << " / " << fmt(tr) << "\n";
  const auto lam = r.column("lambda"), dev = r.column("rel_dev"), an = r.column("j_effective_analytic");
  double worst = 0.0;
  bool zero = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (r.rows[i].failed()) continue;
    if (std::isfinite(dev[i])) worst = std::max(worst, dev[i]);
    if (an[i] != 0.0) zero = false;
  }
  os << "max rel_dev " << fmt(worst) << "\n";
  os << "j_effective_analytic identically zero: " << (zero ? "yes" : "no") << "\n";
  report_tail(os, r);
  r.report = os.str();
  return r;
}

SweepResult run_rectification(const SweepConfig& cfg) {
  SweepResult r = start(cfg, {"lambda", "theta", "phi", "t_left", "t_right", "j_forward", "j_reverse", "asymmetry"});
  const std::vector<double> lams = cfg.lambdas.empty() ? std::vector<double>{cfg.base.left.lambda} : cfg.lambdas;
  r.rows.resize(lams.size());
  parallel_for(r.rows.size(), cfg.workers, [&](std::size_t k) {
    const JunctionSpec fwd = cfg.lambdas.empty() ? cfg.base : cfg.base.with_lambda(lams[k]);
    const JunctionSpec rev = fwd.with_temperatures(fwd.right.temperature, fwd.left.temperature);
    const SweepRow a = solve_point(fwd, cfg);
    const SweepRow b = solve_point(rev, cfg);
    SweepRow row;
    if (a.failed()) {
      row.status = a.status;
    } else if (b.failed()) {
      row.status = b.status;
    } else {
      if (a.status != "ok") add_status(row.status, a.status);
      if (b.status != "ok") add_status(row.status, "reverse:" + b.status);
    }
    const double jf = a.values[0], jr = b.values[0];
    const double sum = std::abs(jf) + std::abs(jr);
    const double asym = sum > 0.0 ? (std::abs(jf) - std::abs(jr)) / sum : 0.0;
    row.values = {fwd.left.lambda,      fwd.left.angle, fwd.right.angle, fwd.left.temperature,
                  fwd.right.temperature, jf,            jr,              asym};
    row.wall_time = a.wall_time + b.wall_time;
    r.rows[k] = std::move(row);
  });

  std::ostringstream os = report_head(r);
  const auto asym = r.column("asymmetry");
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    if (!r.rows[i].failed()) os << "lambda " << fmt(r.rows[i].values[0]) << " asymmetry " << fmt(asym[i]) << "\n";
  report_tail(os, r);
  r.report = os.str();
  return r;
}

void write_outputs(const SweepResult& result, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << result.csv(true);
  }
  std::ofstream rep(path + ".report.txt", std::ios::binary);
  if (!rep) throw Error("cannot write " + path + ".report.txt");
  rep << result.report;
}

}  // namespace qjunction
