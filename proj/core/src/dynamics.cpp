#include "triom/dynamics.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "triom/errors.hpp"

namespace triom {

namespace {

using cd = std::complex<double>;

// Complex partial derivatives of one drift component F with respect to a
// mode amplitude y and its conjugate.
struct PartialPair {
  cd dy;      // dF/dy
  cd dy_bar;  // dF/d(conj y)
};

// All nine coefficient pairs of the linearized dynamics, mode order
// (mirror, field, atom).  Derived by differentiating classical_drift at the
// operating point; valid for complex amplitudes.
struct Linearization {
  PartialPair block[3][3];  // [output mode][input mode]
};

Linearization linearize(const SteadyState& ss, const SystemParams& p) {
  const cd i(0.0, 1.0);
  const cd a = ss.alpha_s, b = ss.b_s, c = ss.c_s;
  const double eta2 = p.eta * p.eta;
  const double nb = std::norm(b);
  const double f1 = 1.0 - 0.5 * eta2 * nb;  // 1 - eta^2/2 |b|^2
  const double u1 = 1.0 - eta2 * nb;        // 1 - eta^2 |b|^2
  const double g = p.g_eff;

  Linearization lin;

  // mirror equation  db/dt = -(gamma_m + i omega_m) b + i xi_0 |a|^2
  //                          - i g [(1 - eta^2 |b|^2) a conj(c) - eta^2/2 conj(a) c b^2]
  lin.block[0][0] = {-(p.gamma_m + i * p.omega_m) +
                         i * g * eta2 * (a * std::conj(c) * std::conj(b) + std::conj(a) * c * b),
                     i * g * eta2 * a * std::conj(c) * b};
  lin.block[0][1] = {i * p.xi0 * std::conj(a) - i * g * std::conj(c) * u1,
                     i * p.xi0 * a + i * g * 0.5 * eta2 * c * b * b};
  lin.block[0][2] = {i * g * 0.5 * eta2 * std::conj(a) * b * b, -i * g * a * u1};

  // field equation  da/dt = -(kappa + i Delta_0f) a + i xi_0 a (b + conj(b))
  //                         - i g f1 b c + E
  lin.block[1][0] = {i * p.xi0 * a - i * g * c * u1,
                     i * p.xi0 * a + i * g * 0.5 * eta2 * c * b * b};
  lin.block[1][1] = {-(p.kappa + i * ss.delta_0f) + i * p.xi0 * (b + std::conj(b)), 0.0};
  lin.block[1][2] = {-i * g * b * f1, 0.0};

  // atom equation  dc/dt = -(gamma_a + i Delta_a) c - i g f1 a conj(b)
  lin.block[2][0] = {i * g * 0.5 * eta2 * a * std::conj(b) * std::conj(b), -i * g * a * u1};
  lin.block[2][1] = {-i * g * std::conj(b) * f1, 0.0};
  lin.block[2][2] = {-(p.gamma_a + i * p.delta_a), 0.0};

  return lin;
}

// Map a complex coefficient pair to the 2x2 real quadrature block: with
// dF = S dy + T d(conj y) and X = (y + conj y)/sqrt(2), Y = (y - conj y)/(i sqrt(2)),
//   d(dX)/dX = Re(S+T),  d(dX)/dY = Im(T-S),
//   d(dY)/dX = Im(S+T),  d(dY)/dY = Re(S-T).
void fill_block(Mat6& mat, int row, int col, const PartialPair& pp) {
  const cd sum = pp.dy + pp.dy_bar;
  const cd dif = pp.dy - pp.dy_bar;
  mat(2 * row, 2 * col) = sum.real();
  mat(2 * row, 2 * col + 1) = -dif.imag();
  mat(2 * row + 1, 2 * col) = sum.imag();
  mat(2 * row + 1, 2 * col + 1) = dif.real();
}

}  // namespace

Mat6 build_drift_matrix(const SteadyState& ss, const SystemParams& p) {
  const Linearization lin = linearize(ss, p);
  Mat6 a;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) fill_block(a, r, c, lin.block[r][c]);
  return a;
}

namespace {

Vec6 quadratures_of(const ClassicalState& s) {
  const double rt2 = std::sqrt(2.0);
  Vec6 u;
  u << rt2 * s.b.real(), rt2 * s.b.imag(), rt2 * s.alpha.real(), rt2 * s.alpha.imag(),
      rt2 * s.c.real(), rt2 * s.c.imag();
  return u;
}

ClassicalState state_of(const Vec6& u) {
  const double rt2 = std::sqrt(2.0);
  return {{u[2] / rt2, u[3] / rt2}, {u[0] / rt2, u[1] / rt2}, {u[4] / rt2, u[5] / rt2}};
}

Vec6 drift_quadratures(const Vec6& u, const SystemParams& p, const cd& drive,
                       double delta_0f) {
  return quadratures_of(classical_drift(state_of(u), p, drive, delta_0f));
}

}  // namespace

Mat6 fd_jacobian(const SteadyState& ss, const SystemParams& p) {
  const Vec6 u0 = quadratures_of({ss.alpha_s, ss.b_s, ss.c_s});
  Mat6 jac;
  for (int col = 0; col < 6; ++col) {
    const double h = 1e-6 * (1.0 + std::abs(u0[col]));
    auto central = [&](double step) -> Vec6 {
      Vec6 up = u0, um = u0;
      up[col] += step;
      um[col] -= step;
      return (drift_quadratures(up, p, ss.drive, ss.delta_0f) -
              drift_quadratures(um, p, ss.drive, ss.delta_0f)) /
             (2.0 * step);
    };
    // One Richardson level: error h^2 -> h^4.
    jac.col(col) = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  }
  return jac;
}

DriftCoefficients drift_coefficients(const SteadyState& ss, const SystemParams& p) {
  const cd a = ss.alpha_s, b = ss.b_s, c = ss.c_s;
  const double eta2 = p.eta * p.eta;
  const double nb = std::norm(b);
  const double f1 = 1.0 - 0.5 * eta2 * nb;
  const double u1 = 1.0 - eta2 * nb;
  const double g = p.g_eff;
  const cd cb = std::conj(b), cc = std::conj(c);

  DriftCoefficients k;
  k.g1 = g * (cc * u1 + 0.5 * eta2 * c * b * b);
  k.g2 = g * cb * f1;
  k.g3 = g * (cc * u1 - 0.5 * eta2 * c * b * b);
  k.m1 = -g * a * (u1 + 0.5 * eta2 * cb * cb);
  k.m2 = g * a * (u1 - 0.5 * eta2 * cb * cb);
  k.m4 = -g * eta2 * a * (cb * cc + c * b - cc * b);
  k.m5 = -g * eta2 * a * (cb * cc + c * b + cc * b);
  k.n1 = g * b * f1;
  k.n2 = -g * a * (u1 + 0.5 * eta2 * b * b);
  k.n3 = g * a * (u1 - 0.5 * eta2 * b * b);
  k.xi = 2.0 * p.xi0 * a;
  k.gamma_1m = p.gamma_m - k.m5.imag();
  k.omega_1m = p.omega_m + k.m4.real();
  k.gamma_2m = p.gamma_m - k.m4.imag();
  k.omega_2m = p.omega_m + k.m5.real();
  return k;
}

Mat6 tabulated_drift_matrix(const DriftCoefficients& c, const SystemParams& p) {
  const double xi_r = c.xi.real();
  Mat6 a;
  a << -c.gamma_1m, c.omega_1m, c.g3.imag(), c.g1.real(), -c.m1.imag(), c.m1.real(),
      -c.omega_2m, -c.gamma_2m, xi_r - c.g3.real(), c.g1.imag(), -c.m2.real(), -c.m2.imag(),
      -c.g1.imag(), c.g1.real(), -p.kappa, p.delta_f, -c.g2.imag(), c.g2.real(),
      xi_r - c.g3.real(), -c.g3.imag(), -p.delta_f, -p.kappa, -c.g2.real(), -c.g2.imag(),
      -c.n2.imag(), c.n2.real(), -c.n1.imag(), c.n1.real(), -p.gamma_a, p.delta_a,
      -c.n3.real(), -c.n3.imag(), -c.n1.real(), -c.n1.imag(), -p.delta_a, -p.gamma_a;
  return a;
}

Mat6 drift_rendering_mismatch(const SteadyState& ss, const SystemParams& p) {
  const Mat6 analytic = build_drift_matrix(ss, p);
  const Mat6 tabulated = tabulated_drift_matrix(drift_coefficients(ss, p), p);
  return (analytic - tabulated).cwiseAbs();
}

std::array<double, 7> characteristic_polynomial(const Mat6& a) {
  // Faddeev-LeVerrier: M_1 = A, c_k = -tr(A M_k)/k with
  // M_k = A (M_{k-1} + c_{k-1} I).
  std::array<double, 7> coef{};
  coef[0] = 1.0;
  Mat6 m = a;
  coef[1] = -m.trace();
  for (int k = 2; k <= 6; ++k) {
    m = a * (m + coef[k - 1] * Mat6::Identity());
    coef[k] = -m.trace() / k;
  }
  return coef;
}

bool routh_hurwitz_stable(const std::array<double, 7>& poly, bool* ill_conditioned) {
  if (ill_conditioned) *ill_conditioned = false;

  // Routh array for degree 6: seven rows, first two taken from the
  // coefficients, the rest by cross elimination.  All roots lie strictly in
  // the left half plane iff the first column has no sign change (and no
  // zero entry).
  double rows[7][4] = {};
  rows[0][0] = poly[0];
  rows[0][1] = poly[2];
  rows[0][2] = poly[4];
  rows[0][3] = poly[6];
  rows[1][0] = poly[1];
  rows[1][1] = poly[3];
  rows[1][2] = poly[5];

  for (int r = 2; r < 7; ++r) {
    const double pivot = rows[r - 1][0];
    if (std::abs(pivot) < 1e-300) {
      if (ill_conditioned) *ill_conditioned = true;
      return false;
    }
    for (int j = 0; j + 1 < 4; ++j)
      rows[r][j] = (pivot * rows[r - 2][j + 1] - rows[r - 2][0] * rows[r - 1][j + 1]) / pivot;
  }

  for (int r = 0; r < 7; ++r) {
    if (!(rows[r][0] > 0.0)) return false;  // sign change, zero, or NaN
  }
  return true;
}

StabilityVerdict stability(const Mat6& a, double omega_m) {
  const double eps_margin = 1e-9 * omega_m;

  StabilityVerdict v;
  Eigen::EigenSolver<Mat6> es(a, /*computeEigenvectors=*/false);
  v.max_real_eigenvalue = es.eigenvalues().real().maxCoeff();
  const bool eig_stable = v.max_real_eigenvalue < -eps_margin;

  // Shifting by +eps makes Routh-Hurwitz decide the same strict predicate.
  bool ill = false;
  const Mat6 shifted = a + eps_margin * Mat6::Identity();
  const bool rh_stable = routh_hurwitz_stable(characteristic_polynomial(shifted), &ill);

  if (ill) {
    v.stable = eig_stable;
    v.method_agreement = false;
  } else {
    v.stable = eig_stable && rh_stable;
    v.method_agreement = eig_stable == rh_stable;
  }
  return v;
}

}  // namespace triom
