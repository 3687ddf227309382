#pragma once

namespace triom {

// Cavity geometry for the Hermite-Gauss mode functions.
struct CavityGeometry {
  double length = 0.0;      // cavity length L [m]
  double waist = 0.0;       // beam waist w0 at the cavity centre [m]
  double wavenumber = 0.0;  // axial wavenumber k0 [1/m]

  double rayleigh_range() const { return 0.5 * waist * waist * wavenumber; }
};

// Transverse Hermite orders (m, n) and axial index l of a cavity mode.
struct ModeIndex {
  int m = 0;
  int n = 0;
  int l = 1;
};

// Mode envelope K and accumulated phase psi at a point.  x is the axial
// coordinate measured from the cavity centre; y, z are transverse.
struct ModeAmplitude {
  double envelope = 0.0;  // K_mnl(x, y, z) [1/m^(3/2)]
  double phase = 0.0;     // psi_mnl(x, y, z) [rad]
};

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
// H_{k+1} = 2 x H_k - 2 k H_{k-1}.  n must be >= 0.
double hermite(int n, double x);

// Hermite-Gauss envelope and phase of mode (m, n, l).  The wavefront
// curvature term k (y^2+z^2) / (2 R(x)) with R(x) = x + xR^2/x is taken as 0
// exactly at x = 0 (flat wavefront at the waist).
ModeAmplitude mode_profile(const ModeIndex& idx, double x, double y, double z,
                           const CavityGeometry& geom);

// Position-dependent atom-field coupling chi = g0 * K * sin(psi - l pi/2).
double coupling_rate(const ModeIndex& idx, double x, double y, double z,
                     const CavityGeometry& geom, double g0);

// Closed-form specialization of coupling_rate for the (0, 0, 1) mode with the
// atom at axial position x0 = epsilon*pi/k0 and transverse radius mu * w(x0):
//   chi = 2 g0 exp(-mu^2) / (w(x0) sqrt(pi L))
//         * sin(k0 x0 - atan(x0/xR) + 2 mu^2 x0/(k0 w0^2) - pi/2).
double axial_coupling_001(double mu, double epsilon, const CavityGeometry& geom,
                          double g0);

// Intensity-dependent mirror-coupling reduction factor
//   f_j(n_b) = sum_{m=0}^{n_b} (-eta^2)^m n_b! / (m! (m+j)! (n_b-m)!).
// Evaluated with exact rational arithmetic for n_b <= 170 and with log-gamma
// magnitudes plus sign tracking beyond, to keep the alternating sum stable.
// Requires j >= 0, n_b >= 0, eta >= 0.
double nonlinearity_f(int j, long n_b, double eta);

// Associated Laguerre polynomial L_n^j(x) by the standard three-term
// recurrence.  Independent cross-check path for nonlinearity_f via
//   f_j(n_b, eta) * (n_b+j)!/n_b! == L_{n_b}^j(eta^2).
double laguerre_recurrence(int n, int j, double x);

}  // namespace triom
