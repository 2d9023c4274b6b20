// Microbenchmarks for the hot paths of a sweep point.  Run with
// OPENBLAS_CORETYPE=Haswell on machines where the backend self-check fails.

#include <numbers>

#include <benchmark/benchmark.h>

#include "qjunction/effective.hpp"
#include "qjunction/rc_embedding.hpp"
#include "qjunction/transport.hpp"

using namespace qjunction;

namespace {

JunctionSpec junction(std::size_t m) {
  return JunctionSpec{}.with_lambda(5.0).with_angles(std::numbers::pi / 2, 0.0).with_truncation(m);
}

void BM_Dawson(benchmark::State& state) {
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dawson(y));
    y = y > 20.0 ? 0.0 : y + 0.37;
  }
}
BENCHMARK(BM_Dawson);

void BM_AssembleDense(benchmark::State& state) {
  const RCModel m = build_rc_model(junction(static_cast<std::size_t>(state.range(0))));
  const auto baths = rc_dissipators(m);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_liouvillian(m.h_s_rc, baths, AssemblyOptions{1000}));
}
BENCHMARK(BM_AssembleDense)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ApplyGenerator(benchmark::State& state) {
  const RCModel m = build_rc_model(junction(static_cast<std::size_t>(state.range(0))));
  const Liouvillian l = assemble_liouvillian(m.h_s_rc, rc_dissipators(m), AssemblyOptions{0});
  const ComplexMatrix rho = ComplexMatrix::Identity(l.dim(), l.dim()) / static_cast<double>(l.dim());
  for (auto _ : state) benchmark::DoNotOptimize(l.apply(rho));
}
BENCHMARK(BM_ApplyGenerator)->Arg(5)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_NessIterative(benchmark::State& state) {
  const JunctionSpec s = junction(static_cast<std::size_t>(state.range(0)));
  NessOptions o;
  o.method = NessMethod::iterative;
  for (auto _ : state) benchmark::DoNotOptimize(rc_ness(s, o, AssemblyOptions{0}));
}
BENCHMARK(BM_NessIterative)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_NessHermitianDense(benchmark::State& state) {
  const JunctionSpec s = junction(static_cast<std::size_t>(state.range(0)));
  NessOptions o;
  o.method = NessMethod::hermitian_dense;
  for (auto _ : state) benchmark::DoNotOptimize(rc_ness(s, o));
}
BENCHMARK(BM_NessHermitianDense)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_PolaronSpectrum(benchmark::State& state) {
  const JunctionSpec s = junction(6);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(polaron_spectrum(s, m, 10, {2.0}));
}
BENCHMARK(BM_PolaronSpectrum)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
