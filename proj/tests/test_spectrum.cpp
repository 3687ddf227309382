#include <cmath>

#include <doctest.h>

#include "triom/errors.hpp"
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

// Scalar Ornstein-Uhlenbeck process embedded in the first coordinate:
// dx = -k x dt + noise with diffusion 2k, so S(w) = 2k/(k^2 + w^2) and the
// stationary variance is (1/2pi) Int S = 1.  The remaining five coordinates
// are fast, noiseless, and decoupled.
struct OuEmbedding {
  Mat6 a = -Mat6::Identity();
  Mat6 d = Mat6::Zero();
  explicit OuEmbedding(double k) {
    a(0, 0) = -k;
    d(0, 0) = 2.0 * k;
  }
};

std::pair<Mat6, Mat6> reference_system() {
  const SystemParams p = reference_params();
  const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
  return {build_drift_matrix(ss, p), build_diffusion_matrix(p)};
}

}  // namespace

TEST_CASE("Lorentzian line of a scalar process") {
  const OuEmbedding sys(0.7);
  // frozen values of 2k/(k^2+w^2) at k = 0.7
  CHECK(displacement_psd(sys.a, sys.d, 0.0) ==
        doctest::Approx(2.857142857142857).epsilon(1e-12));
  CHECK(displacement_psd(sys.a, sys.d, 0.35) ==
        doctest::Approx(2.285714285714286).epsilon(1e-12));
  CHECK(displacement_psd(sys.a, sys.d, 1.0) ==
        doctest::Approx(0.9395973154362416).epsilon(1e-12));

  // unit stationary variance
  CHECK(integrate_spectrum(sys.a, sys.d, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("spectral density is Hermitian and positive semidefinite") {
  const auto [a, d] = reference_system();
  for (double w : {0.0, 0.3, 0.97, 1.0, 1.5, -1.0}) {
    const CMat6 s = spectral_density(a, d, w);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * s.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<CMat6> es(s);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * s.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("displacement spectrum is even in frequency") {
  const auto [a, d] = reference_system();
  for (double w : {0.2, 0.8, 1.0, 1.3}) {
    const double plus = displacement_psd(a, d, w);
    const double minus = displacement_psd(a, d, -w);
    CHECK(plus == doctest::Approx(minus).epsilon(1e-10));
  }
}

TEST_CASE("integrated spectrum reproduces the Lyapunov variance") {
  const auto [a, d] = reference_system();
  const Mat6 v = solve_lyapunov(a, d, 1.0);
  const double integral = integrate_spectrum(a, d, 1.0);
  CHECK(integral == doctest::Approx(v(0, 0)).epsilon(1e-2));
}

TEST_CASE("decoupled mirror shows a single line") {
  SystemParams p = reference_params();
  p.g_eff = 0.0;
  p.xi0 = 0.0;  // mirror sees only its own bath
  const SteadyState ss = solve_steady_state(p, {p.drive_e, 0.0});
  const Mat6 a = build_drift_matrix(ss, p);
  const Mat6 d = build_diffusion_matrix(p);

  const SpectrumSeries series = displacement_spectrum(a, d, -2.0, 2.0, 2001);
  CHECK(series.mode_count == 1);
  REQUIRE(series.peaks.size() >= 1);
  // the line sits at the mechanical frequency within one grid step
  double best = 1e300;
  for (const auto& pk : series.peaks)
    best = std::min(best, std::abs(pk.omega - p.omega_m));
  CHECK(best <= 2.0 * (4.0 / 2000.0));
}

TEST_CASE("series bookkeeping and argument validation") {
  const auto [a, d] = reference_system();

  const SpectrumSeries series = displacement_spectrum(a, d, -2.0, 2.0, 101);
  CHECK(series.omega.size() == 101);
  CHECK(series.s_q.size() == 101);
  CHECK(series.omega.front() == -2.0);
  CHECK(series.omega.back() == 2.0);
  for (double s : series.s_q) CHECK(s >= 0.0);

  CHECK_THROWS_AS(displacement_spectrum(a, d, -2.0, 2.0, 8), ConfigError);
  CHECK_THROWS_AS(displacement_spectrum(a, d, 2.0, -2.0, 101), ConfigError);
}
