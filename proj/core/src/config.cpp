#include "qjunction/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qjunction {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct ModeName {
  SweepMode mode;
  const char* name;
};

constexpr ModeName kModes[] = {
    {SweepMode::single, "single"},
    {SweepMode::angle_grid, "angle-grid"},
    {SweepMode::lambda_scan, "lambda-scan"},
    {SweepMode::m_convergence, "m-convergence"},
    {SweepMode::spectrum, "spectrum"},
    {SweepMode::effective_compare, "effective-compare"},
    {SweepMode::rectification, "rectification"},
};

struct MethodName {
  NessMethod method;
  const char* name;
};

constexpr MethodName kMethods[] = {
    {NessMethod::automatic, "automatic"},
    {NessMethod::hermitian_dense, "hermitian-dense"},
    {NessMethod::complex_dense, "complex-dense"},
    {NessMethod::iterative, "iterative"},
};

std::string method_name(NessMethod m) {
  for (const auto& e : kMethods)
    if (e.method == m) return e.name;
  return "?";
}

// "line L, column C" for a byte offset into the text
std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Accepts plain numbers and strings such as "pi/2", "-pi/4", "3pi/4", "0.5pi".
double angle_value(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    static const std::regex re(R"(^\s*([+-])?\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch m;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, m, re)) {
      double x = kPi;
      if (m[2].length() > 0) x *= std::stod(m[2].str());
      if (m[3].matched) x /= std::stod(m[3].str());
      if (m[1].matched && m[1].str() == "-") x = -x;
      return x;
    }
  }
  throw ConfigError(field + ": expected an angle in radians (number or e.g. \"pi/2\"), got " + v.dump());
}

// Walks one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key) + ": expected a number, got " + v->dump());
      out = v->get<double>();
    }
  }

  void count(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0)
        throw ConfigError(field(key) + ": expected a non-negative integer, got " + v->dump());
      out = v->get<std::size_t>();
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + ": expected a string, got " + v->dump());
      out = v->get<std::string>();
    }
  }

  void angle(const std::string& key, double& out) {
    if (const json* v = find(key)) out = wrap_angle(angle_value(*v, field(key)));
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(field(key) + ": expected an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) throw ConfigError(field(key) + ": expected numbers, got " + e.dump());
        out.push_back(e.get<double>());
      }
    }
  }

  void counts(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(field(key) + ": expected an array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer() || e.get<long long>() < 0)
          throw ConfigError(field(key) + ": expected non-negative integers, got " + e.dump());
        out.push_back(e.get<std::size_t>());
      }
    }
  }

  Section child(const std::string& key) {
    const json* v = find(key);
    static const json empty = json::object();
    return Section(v ? *v : empty, field(key));
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) unknown.push_back(field(it.key()));
    if (unknown.empty()) return;
    std::string msg = "unknown config key";
    msg += unknown.size() > 1 ? "s:" : ":";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// lambda_grid-like section into an explicit list
std::vector<double> grid_section(Section s) {
  double start = 0.1, stop = 40.0;
  std::size_t count = 40;
  std::string spacing = "log";
  s.number("start", start);
  s.number("stop", stop);
  s.count("count", count);
  s.text("spacing", spacing);
  s.finish();
  if (spacing != "log" && spacing != "linear")
    throw ConfigError(s.field("spacing") + ": expected \"log\" or \"linear\", got \"" + spacing + "\"");
  if (count < 1) throw ConfigError(s.field("count") + ": must be >= 1");
  if (spacing == "log" && !(start > 0.0 && stop > 0.0))
    throw ConfigError(s.field("start") + ": log spacing needs positive start and stop");
  return make_grid(start, stop, count, spacing == "log");
}

void read_lambda_list(Section& s, const std::string& list_key, const std::string& grid_key, std::vector<double>& out) {
  if (s.has(list_key) && s.has(grid_key))
    throw ConfigError("give either " + s.field(list_key) + " or " + s.field(grid_key) + ", not both");
  if (s.has(grid_key)) {
    out = grid_section(s.child(grid_key));
  } else {
    s.find(grid_key);
  }
  s.numbers(list_key, out);
}

void read_bath(Section s, BathSpec& b) {
  s.number("temperature", b.temperature);
  s.number("omega", b.omega);
  s.number("gamma", b.gamma);
  s.number("lambda", b.lambda);
  s.number("cutoff", b.cutoff);
  s.angle("angle", b.angle);
  s.finish();
}

void set_path(json& root, const std::string& dotted, json value) {
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override: malformed key \"" + dotted + "\"");
    if (!node->is_object()) throw ConfigError("override: \"" + dotted + "\" descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

void apply_override(json& root, const std::string& item) {
  const std::size_t eq = item.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override \"" + item + "\": expected key=value");
  const std::string key = item.substr(0, eq);
  const std::string raw = item.substr(eq + 1);
  // JSON literals and arrays pass through; anything else is a bare string
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  set_path(root, key, std::move(value));
}

json bath_json(const BathSpec& b) {
  return json{{"temperature", b.temperature}, {"omega", b.omega},   {"gamma", b.gamma},
              {"lambda", b.lambda},           {"cutoff", b.cutoff}, {"angle", b.angle}};
}

}  // namespace

std::string to_string(SweepMode mode) {
  for (const auto& e : kModes)
    if (e.mode == mode) return e.name;
  return "?";
}

SweepMode parse_mode(const std::string& name) {
  for (const auto& e : kModes)
    if (name == e.name) return e.mode;
  std::string msg = "unknown mode \"" + name + "\" (expected one of:";
  for (const auto& e : kModes) msg += std::string(" ") + e.name;
  throw ConfigError(msg + ")");
}

std::vector<double> make_grid(double start, double stop, std::size_t count, bool log) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = log ? start * std::pow(stop / start, t) : start + (stop - start) * t;
  }
  out.back() = stop;
  return out;
}

NessOptions SweepConfig::ness_options() const {
  NessOptions o;
  o.method = method;
  o.iterative_tolerance = tolerance;
  o.gmres_restart = restart;
  o.max_iterations = max_iterations;
  return o;
}

std::vector<std::string> SweepConfig::violations() const {
  std::vector<std::string> out = base.violations();
  if (n_theta < 1) out.push_back("angle_grid.n_theta must be >= 1");
  if (n_phi < 1) out.push_back("angle_grid.n_phi must be >= 1");
  for (double l : lambdas)
    if (!(l >= 0.0) || !std::isfinite(l)) out.push_back("lambdas: every value must be >= 0 (got " + std::to_string(l) + ")");
  for (double l : spectrum_lambdas)
    if (!(l >= 0.0) || !std::isfinite(l))
      out.push_back("spectrum.lambdas: every value must be >= 0 (got " + std::to_string(l) + ")");
  for (std::size_t m : truncations)
    if (m < 2) out.push_back("truncations: every value must be >= 2 (got " + std::to_string(m) + ")");
  if (mode == SweepMode::m_convergence) {
    if (truncations.empty()) out.push_back("truncations must not be empty");
    if (!std::is_sorted(truncations.begin(), truncations.end()) ||
        std::adjacent_find(truncations.begin(), truncations.end()) != truncations.end())
      out.push_back("truncations must be strictly ascending");
  }
  const bool scans = mode == SweepMode::lambda_scan || mode == SweepMode::effective_compare ||
                     mode == SweepMode::m_convergence;
  if (scans && lambdas.empty()) out.push_back("lambdas must not be empty");
  if (mode == SweepMode::spectrum) {
    if (spectrum_lambdas.empty()) out.push_back("spectrum.lambdas must not be empty");
    if (m_large < base.truncation)
      out.push_back("spectrum.m_large must be >= truncation (" + std::to_string(m_large) + " < " +
                    std::to_string(base.truncation) + ")");
    if (levels < 1 || levels > 2 * m_large * m_large)
      out.push_back("spectrum.levels must lie in [1, 2 m_large^2] (got " + std::to_string(levels) + ")");
  }
  if (mode == SweepMode::rectification && base.left.temperature == base.right.temperature)
    out.push_back("rectification needs left.temperature != right.temperature");
  if (!(crossing_threshold > 0.0)) out.push_back("spectrum.threshold must be > 0");
  if (!(tolerance > 0.0)) out.push_back("solver.tolerance must be > 0");
  if (restart < 1) out.push_back("solver.restart must be >= 1");
  if (max_iterations < 1) out.push_back("solver.max_iterations must be >= 1");
  if (max_dimension < 8) out.push_back("max_dimension must be >= 8");
  if (workers < 1) out.push_back("workers must be >= 1");
  if (output.empty()) out.push_back("output must not be empty");
  return out;
}

SweepConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    std::string detail = e.what();
    if (const auto colon = detail.rfind(": "); colon != std::string::npos) detail = detail.substr(colon + 2);
    throw ConfigError("config parse error at " + position(text, e.byte) + ": " + detail);
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& o : overrides) apply_override(root, o);

  SweepConfig cfg;
  Section top(root, "");
  std::string mode;
  if (!top.has("mode")) throw ConfigError("config: missing required key mode");
  top.text("mode", mode);
  cfg.mode = parse_mode(mode);

  top.number("delta", cfg.base.delta);
  top.count("truncation", cfg.base.truncation);

  // shortcuts applied before the bath sections so those can refine them
  if (top.has("lambda") && (root.value("left", json::object()).contains("lambda") ||
                            root.value("right", json::object()).contains("lambda")))
    throw ConfigError("config: give lambda either at top level or per bath, not both");
  double lambda = cfg.base.left.lambda;
  top.number("lambda", lambda);
  cfg.base.left.lambda = cfg.base.right.lambda = lambda;
  if (top.has("theta") && root.value("left", json::object()).contains("angle"))
    throw ConfigError("config: theta and left.angle both given");
  if (top.has("phi") && root.value("right", json::object()).contains("angle"))
    throw ConfigError("config: phi and right.angle both given");
  top.angle("theta", cfg.base.left.angle);
  top.angle("phi", cfg.base.right.angle);
  read_bath(top.child("left"), cfg.base.left);
  read_bath(top.child("right"), cfg.base.right);

  {
    Section g = top.child("angle_grid");
    g.count("n_theta", cfg.n_theta);
    g.count("n_phi", cfg.n_phi);
    g.finish();
  }
  read_lambda_list(top, "lambdas", "lambda_grid", cfg.lambdas);
  top.counts("truncations", cfg.truncations);
  {
    Section s = top.child("spectrum");
    s.count("m_large", cfg.m_large);
    s.count("levels", cfg.levels);
    s.number("threshold", cfg.crossing_threshold);
    read_lambda_list(s, "lambdas", "lambda_grid", cfg.spectrum_lambdas);
    s.finish();
  }
  {
    Section s = top.child("solver");
    std::string method = method_name(cfg.method);
    s.text("method", method);
    bool known = false;
    for (const auto& e : kMethods)
      if (method == e.name) {
        cfg.method = e.method;
        known = true;
      }
    if (!known) throw ConfigError("solver.method: unknown method \"" + method + "\"");
    s.number("tolerance", cfg.tolerance);
    s.count("restart", cfg.restart);
    s.count("max_iterations", cfg.max_iterations);
    s.finish();
  }
  top.count("max_dimension", cfg.max_dimension);
  top.text("output", cfg.output);
  top.count("workers", cfg.workers);
  top.finish();

  // mode-dependent defaults for lists that were not given
  if (cfg.lambdas.empty()) {
    if (cfg.mode == SweepMode::lambda_scan || cfg.mode == SweepMode::effective_compare)
      cfg.lambdas = make_grid(0.1, 40.0, 40, true);
    else if (cfg.mode == SweepMode::m_convergence)
      cfg.lambdas = {cfg.base.left.lambda};
  }
  if (cfg.spectrum_lambdas.empty() && cfg.mode == SweepMode::spectrum) cfg.spectrum_lambdas = make_grid(0.0, 6.0, 21, false);

  const auto v = cfg.violations();
  if (!v.empty()) {
    std::string msg = "invalid config:";
    for (const auto& s : v) msg += "\n  " + s;
    throw ConfigError(msg);
  }
  return cfg;
}

SweepConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const SweepConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.mode);
  j["delta"] = cfg.base.delta;
  j["truncation"] = cfg.base.truncation;
  j["left"] = bath_json(cfg.base.left);
  j["right"] = bath_json(cfg.base.right);
  j["angle_grid"] = {{"n_theta", cfg.n_theta}, {"n_phi", cfg.n_phi}};
  j["lambdas"] = cfg.lambdas;
  j["truncations"] = cfg.truncations;
  j["spectrum"] = {{"m_large", cfg.m_large},
                   {"levels", cfg.levels},
                   {"threshold", cfg.crossing_threshold},
                   {"lambdas", cfg.spectrum_lambdas}};
  j["solver"] = {{"method", method_name(cfg.method)},
                 {"tolerance", cfg.tolerance},
                 {"restart", cfg.restart},
                 {"max_iterations", cfg.max_iterations}};
  j["max_dimension"] = cfg.max_dimension;
  j["output"] = cfg.output;
  j["workers"] = cfg.workers;
  return j.dump(2) + "\n";
}

}  // namespace qjunction
