#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "triom/steady_state.hpp"

namespace triom {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Quadrature ordering used everywhere:
//   u = (dq, dp, dX_f, dY_f, dX_a, dY_a)
// i.e. mirror position/momentum, cavity field quadratures, atom quadratures,
// with X = (a + a^dag)/sqrt(2), Y = (a - a^dag)/(i sqrt(2)) so the vacuum
// variance is 1/2.

// Drift matrix of the linearized fluctuation dynamics, du/dt = A u + noise.
// Built by analytic differentiation of classical_drift at the operating
// point; valid for complex steady amplitudes.
Mat6 build_drift_matrix(const SteadyState& ss, const SystemParams& p);

// Finite-difference Jacobian of classical_drift in the quadrature
// representation: central differences with component-relative step
// h_i = 1e-6 * (1 + |u_i|) and one Richardson extrapolation level.
// Independent oracle for build_drift_matrix.
Mat6 fd_jacobian(const SteadyState& ss, const SystemParams& p);

// Closed-form coefficient table of the linearized dynamics around a steady
// state with (approximately) real field amplitude: effective mirror
// rates/frequencies and the complex coupling constants that fill the drift
// matrix.  Kept as an independently coded rendering to cross-check
// build_drift_matrix.
struct DriftCoefficients {
  std::complex<double> g1, g2, g3;  // field-mirror / field-atom couplings [rad/s]
  std::complex<double> m1, m2;      // mirror-atom couplings [rad/s]
  std::complex<double> m4, m5;      // mirror self-energy corrections [rad/s]
  std::complex<double> n1, n2, n3;  // atom-row couplings [rad/s] (G factor included)
  std::complex<double> xi;          // field-enhanced optomechanical coupling 2 xi_0 alpha_s
  double gamma_1m = 0, gamma_2m = 0;  // effective mirror damping rates [rad/s]
  double omega_1m = 0, omega_2m = 0;  // effective mirror frequencies [rad/s]
};

DriftCoefficients drift_coefficients(const SteadyState& ss, const SystemParams& p);

// Drift matrix assembled from the coefficient table.  The table is derived
// under a phase convention with real field amplitude: it reproduces the
// analytic matrix exactly (up to roundoff) when Im(alpha_s) = 0 and drifts
// away proportionally to Im(alpha_s) otherwise.  Use
// drift_rendering_mismatch to quantify.
Mat6 tabulated_drift_matrix(const DriftCoefficients& c, const SystemParams& p);

// Entrywise |analytic - tabulated| diagnostic.  Never folded back into the
// solvers; large values flag either a complex operating point or a defect in
// one of the two constructions.
Mat6 drift_rendering_mismatch(const SteadyState& ss, const SystemParams& p);

// Coefficients [1, c1, ..., c6] of det(lambda I - A) by the
// Faddeev-LeVerrier recurrence.
std::array<double, 7> characteristic_polynomial(const Mat6& a);

// Routh-Hurwitz test on a degree-6 monic polynomial.  Returns true when all
// roots have negative real part.  *ill_conditioned is set when a pivot
// magnitude falls below 1e-300 and the verdict is unreliable.
bool routh_hurwitz_stable(const std::array<double, 7>& poly, bool* ill_conditioned);

struct StabilityVerdict {
  bool stable = false;              // both methods certify max Re(lambda) < -eps_margin
  double max_real_eigenvalue = 0;   // from the eigenvalue route
  bool method_agreement = false;    // Routh-Hurwitz agreed with the eigenvalue route
};

// Dual-route stability test with margin eps_margin = 1e-9 * omega_m:
// (i) Routh-Hurwitz on the characteristic polynomial of A + eps_margin*I and
// (ii) eigenvalues of A.  Both must certify.  Marginal spectra count as
// unstable.  If the Routh table is ill-conditioned the eigenvalue verdict
// alone decides and method_agreement is false.
StabilityVerdict stability(const Mat6& a, double omega_m);

}  // namespace triom
