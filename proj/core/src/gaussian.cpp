#include "triom/gaussian.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "triom/dynamics.hpp"
#include "triom/errors.hpp"

namespace triom {

namespace {

using cd = std::complex<double>;
using CMat6 = Eigen::Matrix<cd, 6, 6>;
using CMat4 = Eigen::Matrix<cd, 4, 4>;

Eigen::Matrix<double, 6, 6> symplectic_form_6() {
  Eigen::Matrix<double, 6, 6> omega = Eigen::Matrix<double, 6, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::Matrix<double, 4, 4> symplectic_form_4() {
  Eigen::Matrix<double, 4, 4> omega = Eigen::Matrix<double, 4, 4>::Zero();
  for (int k = 0; k < 2; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

}  // namespace

Mat6 build_diffusion_matrix(const SystemParams& p) {
  Mat6 d = Mat6::Zero();
  const double mech = p.gamma_m * (2.0 * p.n_th + 1.0);
  d(0, 0) = mech;
  d(1, 1) = mech;
  d(2, 2) = p.kappa;
  d(3, 3) = p.kappa;
  d(4, 4) = p.gamma_a;
  d(5, 5) = p.gamma_a;
  return d;
}

Mat6 solve_lyapunov(const Mat6& a, const Mat6& d, double omega_m) {
  const StabilityVerdict verdict = stability(a, omega_m);
  if (!verdict.stable) throw UnstableDrift("drift matrix is not strictly stable; no stationary covariance exists");

  // Vectorized form: (I (x) A + A (x) I) vec(V) = -vec(D), column-major vec.
  Eigen::Matrix<double, 36, 36> kron = Eigen::Matrix<double, 36, 36>::Zero();
  for (int col = 0; col < 6; ++col)
    kron.block<6, 6>(6 * col, 6 * col) += a;  // I (x) A
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int r = 0; r < 6; ++r) kron(6 * i + r, 6 * j + r) += a(i, j);  // A (x) I

  Eigen::Matrix<double, 36, 1> rhs;
  for (int col = 0; col < 6; ++col)
    for (int row = 0; row < 6; ++row) rhs[6 * col + row] = -d(row, col);

  const Eigen::Matrix<double, 36, 1> sol = kron.partialPivLu().solve(rhs);
  if (!sol.allFinite()) throw SingularSystem("Lyapunov system is singular");

  Mat6 v;
  for (int col = 0; col < 6; ++col)
    for (int row = 0; row < 6; ++row) v(row, col) = sol[6 * col + row];
  v = 0.5 * (v + v.transpose()).eval();

  const double d_norm = d.cwiseAbs().rowwise().sum().maxCoeff();
  if (lyapunov_residual(a, d, v) > 1e-10 * std::max(1.0, d_norm))
    throw SingularSystem("Lyapunov residual exceeds certificate tolerance");
  return v;
}

double lyapunov_residual(const Mat6& a, const Mat6& d, const Mat6& v) {
  const Mat6 res = a * v + v * a.transpose() + d;
  return res.cwiseAbs().rowwise().sum().maxCoeff();
}

double physicality_margin(const Mat6& v) {
  const cd i(0.0, 1.0);
  const CMat6 herm = v.cast<cd>() + 0.5 * i * symplectic_form_6().cast<cd>();
  Eigen::SelfAdjointEigenSolver<CMat6> es(herm);
  return es.eigenvalues().minCoeff();
}

Mat4 reduce_bipartite(const Mat6& v, ModePair pair) {
  // Quadrature offsets per mode: mirror 0, field 2, atom 4.
  int first = 0, second = 0;
  switch (pair) {
    case ModePair::atom_mirror:
      first = 4;
      second = 0;
      break;
    case ModePair::field_atom:
      first = 2;
      second = 4;
      break;
    case ModePair::mirror_field:
      first = 0;
      second = 2;
      break;
  }
  const int idx[4] = {first, first + 1, second, second + 1};
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = v(idx[i], idx[j]);
  return r;
}

double min_symplectic_eigenvalue_pt(const Mat4& v) {
  const Eigen::Matrix2d b = v.block<2, 2>(0, 0);
  const Eigen::Matrix2d bp = v.block<2, 2>(2, 2);
  const Eigen::Matrix2d c = v.block<2, 2>(0, 2);

  // Partial transposition flips the sign of det C in the symplectic
  // invariant; the smaller PT symplectic eigenvalue follows in closed form.
  const double sigma = b.determinant() + bp.determinant() - 2.0 * c.determinant();
  const double det_v = v.determinant();

  double disc = sigma * sigma - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, sigma * sigma))
      throw UnphysicalCM("negative discriminant in symplectic invariant");
    disc = 0.0;
  }
  double inner = 0.5 * (sigma - std::sqrt(disc));
  if (inner < 0.0) {
    if (inner < -1e-12 * std::max(1.0, std::abs(sigma)))
      throw UnphysicalCM("negative squared symplectic eigenvalue");
    inner = 0.0;
  }
  return std::sqrt(inner);
}

double min_symplectic_eigenvalue_pt_direct(const Mat4& v) {
  // Partial transpose of the second mode: momentum sign flip.
  Eigen::Matrix4d p = Eigen::Matrix4d::Identity();
  p(3, 3) = -1.0;
  const Eigen::Matrix4d v_pt = p * v * p;

  const cd i(0.0, 1.0);
  const CMat4 m = i * symplectic_form_4().cast<cd>() * v_pt.cast<cd>();
  Eigen::ComplexEigenSolver<CMat4> es(m, /*computeEigenvectors=*/false);
  double min_abs = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) min_abs = std::min(min_abs, std::abs(es.eigenvalues()[k]));
  return min_abs;
}

double log_negativity(const Mat4& v) {
  const double eta_minus = min_symplectic_eigenvalue_pt(v);
  if (eta_minus <= 0.0) throw UnphysicalCM("vanishing partial-transpose symplectic eigenvalue");
  return std::max(0.0, -std::log(2.0 * eta_minus));
}

double log_negativity(const Mat6& v, ModePair pair) {
  return log_negativity(reduce_bipartite(v, pair));
}

}  // namespace triom
