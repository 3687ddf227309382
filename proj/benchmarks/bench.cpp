// Microbenchmarks for the hot paths of a parameter sweep: steady-state solve,
// drift assembly, Lyapunov solve, negativity and one spectrum evaluation.
// Build-only target; not part of the test suite.

#include <benchmark/benchmark.h>

#include "triom/dynamics.hpp"
#include "triom/gaussian.hpp"
#include "triom/spectrum.hpp"
#include "triom/steady_state.hpp"

using namespace triom;

namespace {

SystemParams reference_params() {
  SystemParams p;
  p.input_level = InputLevel::dimensionless;
  p.omega_m = 1.0;
  p.gamma_m = 1e-5;
  p.kappa = 0.1;
  p.gamma_a = 0.05;
  p.delta_a = 1.0;
  p.delta_f = 1.0;
  p.eta = 0.05;
  p.g_eff = 0.02;
  p.xi0 = 0.005;
  p.drive_e = 30.0;
  p.n_th = 100.0;
  return p;
}

struct Fixture {
  SystemParams p = reference_params();
  SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
  Mat6 a = build_drift_matrix(ss, p);
  Mat6 d = build_diffusion_matrix(p);
  Mat6 v = solve_lyapunov(a, d, p.omega_m);
};

const Fixture& fixture() {
  static const Fixture fx;
  return fx;
}

void BM_steady_solve(benchmark::State& state) {
  const SystemParams p = reference_params();
  for (auto _ : state) {
    SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
    benchmark::DoNotOptimize(ss.alpha_s);
  }
}
BENCHMARK(BM_steady_solve);

void BM_drift_build(benchmark::State& state) {
  const Fixture& fx = fixture();
  for (auto _ : state) {
    Mat6 a = build_drift_matrix(fx.ss, fx.p);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_drift_build);

void BM_stability(benchmark::State& state) {
  const Fixture& fx = fixture();
  for (auto _ : state) {
    StabilityVerdict v = stability(fx.a, fx.p.omega_m);
    benchmark::DoNotOptimize(v.stable);
  }
}
BENCHMARK(BM_stability);

void BM_lyapunov(benchmark::State& state) {
  const Fixture& fx = fixture();
  for (auto _ : state) {
    Mat6 v = solve_lyapunov(fx.a, fx.d, fx.p.omega_m);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_lyapunov);

void BM_negativity(benchmark::State& state) {
  const Fixture& fx = fixture();
  for (auto _ : state) {
    double en = log_negativity(fx.v, ModePair::atom_mirror);
    benchmark::DoNotOptimize(en);
  }
}
BENCHMARK(BM_negativity);

void BM_spectrum_point(benchmark::State& state) {
  const Fixture& fx = fixture();
  double w = 0.9;
  for (auto _ : state) {
    double s = displacement_psd(fx.a, fx.d, w);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_spectrum_point);

void BM_spectrum_series(benchmark::State& state) {
  const Fixture& fx = fixture();
  for (auto _ : state) {
    SpectrumSeries series = displacement_spectrum(fx.a, fx.d, -2.0, 2.0, 2001);
    benchmark::DoNotOptimize(series.mode_count);
  }
}
BENCHMARK(BM_spectrum_series);

}  // namespace

BENCHMARK_MAIN();
