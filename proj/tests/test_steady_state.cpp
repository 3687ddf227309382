#include <cmath>
#include <complex>

#include <doctest.h>

#include "triom/errors.hpp"
#include "triom/steady_state.hpp"

using namespace triom;

namespace {

// Dimensionless operating point on the cooling side (stable and contractive).
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

double state_norm(const SteadyState& s) {
  return std::sqrt(std::norm(s.alpha_s) + std::norm(s.b_s) + std::norm(s.c_s));
}

}  // namespace

TEST_CASE("decoupled atom (G = 0): closed-form steady state") {
  SystemParams p = reference_params();
  p.g_eff = 0.0;
  p.delta_f = -0.6;
  const cplx drive(25.0, 0.0);

  const SteadyState ss = solve_steady_state(p, drive);

  // With the effective detuning pinned, the field equation is linear.
  const cplx alpha_exact = drive / cplx(p.kappa, p.delta_f);
  const cplx b_exact =
      cplx(0.0, p.xi0) * std::norm(alpha_exact) / cplx(p.gamma_m, p.omega_m);
  CHECK(std::abs(ss.alpha_s - alpha_exact) <= 1e-10 * std::abs(alpha_exact));
  CHECK(std::abs(ss.b_s - b_exact) <= 1e-10 * std::abs(b_exact));
  CHECK(std::abs(ss.c_s) <= 1e-12);
  CHECK(ss.delta_0f ==
        doctest::Approx(p.delta_f + 2.0 * p.xi0 * b_exact.real()).epsilon(1e-12));
  CHECK(ss.xi == 2.0 * p.xi0 * ss.alpha_s);
}

TEST_CASE("residual certificate and reported detunings") {
  const SystemParams p = reference_params();
  const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});

  CHECK(ss.residual <= 1e-12 * std::max(1.0, state_norm(ss) * p.omega_m));
  CHECK(ss.delta_f == p.delta_f);
  CHECK(ss.delta_0f == doctest::Approx(p.delta_f + 2.0 * p.xi0 * ss.b_s.real()));

  // recomputing the drift at the solution reproduces the reported residual
  const ClassicalState drift =
      classical_drift({ss.alpha_s, ss.b_s, ss.c_s}, p, ss.drive, ss.delta_0f);
  const double res = std::sqrt(std::norm(drift.alpha) + std::norm(drift.b) +
                               std::norm(drift.c));
  CHECK(res == doctest::Approx(ss.residual).scale(1e-18).epsilon(1e-9));
}

TEST_CASE("required_drive inverts solve_steady_state") {
  const SystemParams p = reference_params();
  for (const cplx target : {cplx(3.0, 0.0), cplx(15.0, 0.0), cplx(8.0, -2.0)}) {
    const cplx drive = required_drive(target, p);
    const SteadyState ss = solve_steady_state(p, drive);
    CHECK(std::abs(ss.alpha_s - target) <= 1e-9 * std::max(1.0, std::abs(target)));
  }
}

TEST_CASE("deterministic: identical inputs give identical bits") {
  const SystemParams p = reference_params();
  const SteadyState a = solve_steady_state(p, {p.drive_e, 0.0});
  const SteadyState b = solve_steady_state(p, {p.drive_e, 0.0});
  CHECK(a.alpha_s == b.alpha_s);
  CHECK(a.b_s == b.b_s);
  CHECK(a.c_s == b.c_s);
  CHECK(a.residual == b.residual);
}

TEST_CASE("runaway amplitudes are reported, not returned") {
  SystemParams p = reference_params();
  p.delta_f = -1.0;  // amplifying side
  p.xi0 = 0.1;
  CHECK_THROWS_AS(solve_steady_state(p, {1e9, 0.0}), DivergedAmplitude);
}

TEST_CASE("zero drive gives the trivial fixed point") {
  const SystemParams p = reference_params();
  const SteadyState ss = solve_steady_state(p, {0.0, 0.0});
  CHECK(std::abs(ss.alpha_s) == 0.0);
  CHECK(std::abs(ss.b_s) == 0.0);
  CHECK(std::abs(ss.c_s) == 0.0);
  CHECK(ss.residual == 0.0);
  CHECK_FALSE(ss.multiple_roots);
}

TEST_CASE("moderate drive on the connected branch is single-rooted") {
  const SystemParams p = reference_params();
  const SteadyState ss = solve_steady_state(p, {10.0, 0.0});
  CHECK_FALSE(ss.multiple_roots);
}
