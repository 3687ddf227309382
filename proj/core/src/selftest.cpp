#include "triom/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>

#include "triom/dynamics.hpp"
#include "triom/errors.hpp"
#include "triom/gaussian.hpp"
#include "triom/modes.hpp"
#include "triom/params.hpp"
#include "triom/spectrum.hpp"
#include "triom/steady_state.hpp"

namespace triom {

namespace {

using cd = std::complex<double>;

// Stable, well-coupled dimensionless operating point used by the invariant
// checks that need a full pipeline run (both detunings on the cooling side).
SystemConfig reference_config() {
  SystemConfig cfg;
  cfg.input_level = InputLevel::dimensionless;
  cfg.omega_m = 1.0;
  cfg.quality_factor = 1e5;
  cfg.kappa = 0.1;
  cfg.gamma_a = 0.05;
  cfg.delta_a = 1.0;
  cfg.delta_f = 1.0;
  cfg.effective.eta = 0.05;
  cfg.effective.big_g = 0.02;
  cfg.effective.xi0 = 0.005;
  cfg.drive_e = 30.0;
  cfg.n_th_direct = 100.0;
  return cfg;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

SelfTestCheck check_nonlinearity() {
  // f_j(n_b, eta) * (n_b+j)!/n_b! must match the Laguerre recurrence at
  // +eta^2.  Large eta only below the exact-arithmetic cutoff; above it the
  // log-domain evaluation is compared in its well-conditioned regime.
  double worst = 0.0;
  const int js[] = {0, 1, 2, 3, 4, 5};
  const long small_nb[] = {0, 1, 2, 5, 10, 25, 60, 100, 140, 170};
  const double small_eta[] = {0.02, 0.3, 0.9};
  const long big_nb[] = {171, 200, 350};
  const double big_eta[] = {0.01, 0.05};

  auto accumulate = [&](long nb, double eta, int j) {
    double rising = 1.0;  // (n_b+j)!/n_b!
    for (int m = 1; m <= j; ++m) rising *= static_cast<double>(nb + m);
    const double lhs = nonlinearity_f(j, nb, eta) * rising;
    const double rhs = laguerre_recurrence(nb, j, eta * eta);
    const double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    worst = std::max(worst, err);
  };

  for (int j : js) {
    for (long nb : small_nb)
      for (double eta : small_eta) accumulate(nb, eta, j);
    for (long nb : big_nb)
      for (double eta : big_eta) accumulate(nb, eta, j);
  }

  SelfTestCheck c;
  c.name = "nonlinearity-vs-laguerre";
  c.passed = worst <= 1e-8;
  c.detail = "worst mixed error " + fmt(worst);
  return c;
}

SelfTestCheck check_round_trip() {
  const SystemParams p = derive_parameters(reference_config());
  const cd targets[] = {{5.0, 0.0}, {20.0, 0.0}, {12.0, -4.0}};
  double worst = 0.0;
  std::string failure;
  for (const cd& alpha : targets) {
    try {
      const cd drive = required_drive(alpha, p);
      const SteadyState ss = solve_steady_state(p, drive);
      const double err = std::abs(ss.alpha_s - alpha) / std::max(1.0, std::abs(alpha));
      worst = std::max(worst, err);
    } catch (const std::exception& ex) {
      failure = ex.what();
      break;
    }
  }
  SelfTestCheck c;
  c.name = "steady-state-round-trip";
  c.passed = failure.empty() && worst <= 1e-8;
  c.detail = failure.empty() ? "worst relative error " + fmt(worst) : failure;
  return c;
}

SelfTestCheck check_jacobian(const SelfTestOptions& options) {
  const SystemParams p = derive_parameters(reference_config());
  const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
  Mat6 analytic = build_drift_matrix(ss, p);
  analytic(0, 1) += options.drift_perturbation;  // fault-injection hook
  const Mat6 fd = fd_jacobian(ss, p);
  const double scale = std::max(1.0, analytic.cwiseAbs().rowwise().sum().maxCoeff());
  const double err = (analytic - fd).cwiseAbs().rowwise().sum().maxCoeff() / scale;

  SelfTestCheck c;
  c.name = "jacobian-consistency";
  c.passed = err <= 1e-6;
  c.detail = "normalized drift mismatch " + fmt(err);
  return c;
}

SelfTestCheck check_lyapunov(const SelfTestOptions& options) {
  SelfTestCheck c;
  c.name = "lyapunov-physicality";
  try {
    const SystemParams p = derive_parameters(reference_config());
    const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
    const Mat6 a = build_drift_matrix(ss, p);
    Mat6 d = build_diffusion_matrix(p);
    if (options.diffusion_sign_flip) d = (-d).eval();  // fault-injection hook
    const Mat6 v = solve_lyapunov(a, d, p.omega_m);
    const double res = lyapunov_residual(a, d, v);
    const double d_norm = d.cwiseAbs().rowwise().sum().maxCoeff();
    const double margin = physicality_margin(v);
    c.passed = res <= 1e-10 * std::max(1.0, d_norm) && margin >= -1e-9;
    c.detail = "residual " + fmt(res) + ", physicality margin " + fmt(margin);
  } catch (const std::exception& ex) {
    c.passed = false;
    c.detail = ex.what();
  }
  return c;
}

SelfTestCheck check_negativity() {
  double worst_exact = 0.0;   // closed form vs two-mode squeezed analytics
  double worst_routes = 0.0;  // closed form vs direct symplectic diagonalization

  for (double r : {0.5, 1.0, 2.0}) {
    const double ch = 0.5 * std::cosh(2.0 * r);
    const double sh = 0.5 * std::sinh(2.0 * r);
    Mat4 v = Mat4::Zero();
    v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = ch;
    v(0, 2) = v(2, 0) = sh;
    v(1, 3) = v(3, 1) = -sh;

    const double eta_closed = min_symplectic_eigenvalue_pt(v);
    const double eta_exact = 0.5 * std::exp(-2.0 * r);
    worst_exact = std::max(worst_exact, std::abs(eta_closed - eta_exact) / eta_exact);
    worst_exact = std::max(worst_exact, std::abs(log_negativity(v) - 2.0 * r) / (2.0 * r));
    worst_routes = std::max(worst_routes,
                            std::abs(eta_closed - min_symplectic_eigenvalue_pt_direct(v)));
  }

  // Same two-route agreement on the reduced pairs of a real covariance.
  const SystemParams p = derive_parameters(reference_config());
  const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
  const Mat6 a = build_drift_matrix(ss, p);
  const Mat6 v6 = solve_lyapunov(a, build_diffusion_matrix(p), p.omega_m);
  for (ModePair pair :
       {ModePair::atom_mirror, ModePair::field_atom, ModePair::mirror_field}) {
    const Mat4 v4 = reduce_bipartite(v6, pair);
    worst_routes = std::max(worst_routes,
                            std::abs(min_symplectic_eigenvalue_pt(v4) -
                                     min_symplectic_eigenvalue_pt_direct(v4)));
  }

  SelfTestCheck c;
  c.name = "negativity-two-route";
  // The closed form loses ~6 digits to cancellation at r = 2, so 1e-9 is the
  // honest tolerance against the exact exp(-2r)/2 value.
  c.passed = worst_exact <= 1e-9 && worst_routes <= 1e-9;
  c.detail = "squeezed-state error " + fmt(worst_exact) + ", route gap " + fmt(worst_routes);
  return c;
}

SelfTestCheck check_parseval() {
  SelfTestCheck c;
  c.name = "spectrum-parseval";
  try {
    // Decoupled single-rate reference: S_qq = 2k/(k^2+w^2), variance 1.
    const double k = 0.7;
    Mat6 a = -Mat6::Identity();
    a(0, 0) = -k;
    Mat6 d = Mat6::Zero();
    d(0, 0) = 2.0 * k;
    double worst = std::abs(displacement_psd(a, d, 0.0) - 2.0 / k) / (2.0 / k);
    const double s_exact = 2.0 * k / (k * k + 1.0);
    worst = std::max(worst, std::abs(displacement_psd(a, d, 1.0) - s_exact) / s_exact);
    const double lorentzian = integrate_spectrum(a, d, 1.0);
    worst = std::max(worst, std::abs(lorentzian - 1.0));
    if (worst > 1e-3) {
      c.passed = false;
      c.detail = "single-rate reference error " + fmt(worst);
      return c;
    }

    const SystemParams p = derive_parameters(reference_config());
    const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
    const Mat6 drift = build_drift_matrix(ss, p);
    const Mat6 v = solve_lyapunov(drift, build_diffusion_matrix(p), p.omega_m);
    const double integral = integrate_spectrum(drift, build_diffusion_matrix(p), p.omega_m);
    const double rel = std::abs(integral - v(0, 0)) / v(0, 0);
    c.passed = rel <= 0.01;
    c.detail = "variance mismatch " + fmt(rel) + " (reference " + fmt(worst) + ")";
  } catch (const std::exception& ex) {
    c.passed = false;
    c.detail = ex.what();
  }
  return c;
}

SelfTestCheck check_stability_routes() {
  // Deterministic sample of random drift matrices; on non-marginal spectra
  // the polynomial route must agree with the eigenvalue route every time.
  std::mt19937 gen(12345u);
  auto uniform = [&gen] {
    return 3.0 * (static_cast<double>(gen()) / 4294967296.0) - 1.5;
  };

  int disagreements = 0, marginal = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Mat6 a;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) a(i, j) = uniform();
    const StabilityVerdict v = stability(a, 1.0);
    if (std::abs(v.max_real_eigenvalue + 1e-9) < 1e-6) {
      ++marginal;  // too close to the decision threshold to compare routes
      continue;
    }
    if (!v.method_agreement) ++disagreements;
  }

  SelfTestCheck c;
  c.name = "stability-two-route";
  c.passed = disagreements == 0;
  c.detail = std::to_string(trials - marginal) + " comparable samples, " +
             std::to_string(disagreements) + " disagreements";
  return c;
}

}  // namespace

SelfTestReport run_selftest(const SelfTestOptions& options) {
  SelfTestReport report;
  report.checks.push_back(check_nonlinearity());
  report.checks.push_back(check_round_trip());
  report.checks.push_back(check_jacobian(options));
  report.checks.push_back(check_lyapunov(options));
  report.checks.push_back(check_negativity());
  report.checks.push_back(check_parseval());
  report.checks.push_back(check_stability_routes());

  report.all_passed = true;
  for (const SelfTestCheck& c : report.checks) report.all_passed = report.all_passed && c.passed;
  return report;
}

}  // namespace triom
