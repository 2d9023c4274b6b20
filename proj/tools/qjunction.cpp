// qjunction <mode> --config <path> [--out <path>] [--workers N] [--override key=value ...]
//
// Exit codes: 0 success, 1 config or setup error, 2 some grid points failed
// (partial output is still written).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "qjunction/config.hpp"
#include "qjunction/operator.hpp"
#include "qjunction/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPointFailures = 2;

// OpenBLAS fixes its kernel choice when the library loads, so a bad choice
// can only be corrected by starting over with the core type pinned.
int check_backend(char** argv) {
  const std::string diagnosis = qjunction::linear_algebra_self_check();
  if (diagnosis.empty()) return kOk;
  if (!std::getenv("OPENBLAS_CORETYPE")) {
    setenv("OPENBLAS_CORETYPE", "Haswell", 1);
    execv("/proc/self/exe", argv);
  }
  std::cerr << "qjunction: " << diagnosis << "\n";
  return kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat current through a qubit junction: reaction-coordinate Redfield sweeps"};
  std::string mode;
  std::string config_path;
  std::string out;
  std::size_t workers = 0;
  std::vector<std::string> overrides;
  bool print_config = false;

  app.add_option("mode", mode, "single | angle-grid | lambda-scan | m-convergence | spectrum | effective-compare | rectification")
      ->required();
  app.add_option("--config,-c", config_path, "JSON run configuration")->required();
  app.add_option("--out,-o", out, "CSV output path (report goes to <out>.report.txt)");
  app.add_option("--workers,-j", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "dotted key=value applied on top of the file, e.g. left.temperature=3");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");
  app.set_version_flag("--version", qjunction::library_version());
  CLI11_PARSE(app, argc, argv);

  if (const int rc = check_backend(argv); rc != kOk) return rc;

  qjunction::SweepConfig cfg;
  try {
    std::vector<std::string> all{"mode=" + mode};
    all.insert(all.end(), overrides.begin(), overrides.end());
    cfg = qjunction::load_config(config_path, all);
    if (!out.empty()) cfg.output = out;
    if (workers > 0) cfg.workers = workers;
  } catch (const qjunction::Error& e) {
    std::cerr << "qjunction: " << e.what() << "\n";
    return kConfigError;
  }
  if (print_config) {
    std::cout << qjunction::serialize_config(cfg);
    return kOk;
  }

  const auto t0 = std::chrono::steady_clock::now();
  qjunction::SweepResult result;
  try {
    result = qjunction::run_sweep(cfg);
  } catch (const qjunction::Error& e) {
    // unsupported family and the like end the whole run
    std::cerr << "qjunction: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    qjunction::write_outputs(result, cfg.output);
  } catch (const std::exception& e) {
    std::cerr << "qjunction: " << e.what() << "\n";
    return kConfigError;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << result.report;
  std::fprintf(stderr, "wrote %s and %s.report.txt (%zu rows, %.1f s)\n", cfg.output.c_str(), cfg.output.c_str(),
               result.rows.size(), elapsed);
  return result.failures() > 0 ? kPointFailures : kOk;
}
