#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "triom/gaussian.hpp"

namespace triom {

using CMat6 = Eigen::Matrix<std::complex<double>, 6, 6>;

// Stationary noise spectrum S(omega) = (A + i w I)^{-1} D (A + i w I)^{-H},
// Hermitian positive semidefinite by construction.  Normalization is fixed by
// V = (1/2pi) Int S(w) dw equaling the Lyapunov covariance.
CMat6 spectral_density(const Mat6& a, const Mat6& d, double omega);

// Mirror displacement spectrum S_q(omega): the (1,1) element of
// spectral_density.  Real and nonnegative; tiny negative roundoff
// (> -1e-12) is clamped to 0.
double displacement_psd(const Mat6& a, const Mat6& d, double omega);

struct SpectralPeak {
  double omega = 0;       // peak location [rad/s]
  double height = 0;      // S_q at the peak
  double prominence = 0;  // height above the higher of the two enclosing bases
};

struct SpectrumSeries {
  std::vector<double> omega;  // uniform grid
  std::vector<double> s_q;    // S_q on the grid
  std::vector<SpectralPeak> peaks;  // prominence >= 5% of the global maximum
  int mode_count = 0;         // number of detected peaks at omega >= 0
};

// Sample S_q on a uniform grid and classify its peak structure.  Peaks keep
// the local maxima whose prominence is at least 5% of the global maximum.
// points must be >= 9; for normal-mode classification use >= 2001 points
// spanning at least [-2 omega_m, 2 omega_m].
SpectrumSeries displacement_spectrum(const Mat6& a, const Mat6& d,
                                     double omega_min, double omega_max,
                                     int points);

// (1/2pi) Int S_q(w) dw over the real line: adaptive Gauss-Kronrod on
// [-40 omega_m, 40 omega_m] plus the analytic 1/w^2 tail estimate
// D(0,0)/(pi W).  Agrees with the Lyapunov V(0,0) within quadrature
// tolerance; throws QuadratureNotConverged when the error estimate exceeds
// 1e-4 of the integral.
double integrate_spectrum(const Mat6& a, const Mat6& d, double omega_m);

}  // namespace triom
