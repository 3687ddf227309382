#pragma once

#include <Eigen/Dense>

#include "triom/dynamics.hpp"

namespace triom {

using Mat4 = Eigen::Matrix<double, 4, 4>;

// Diffusion matrix of the input noise in the quadrature ordering
// (mirror, field, atom):
//   D = diag(gamma_m (2 n_th + 1), gamma_m (2 n_th + 1), kappa, kappa,
//            gamma_a, gamma_a).
Mat6 build_diffusion_matrix(const SystemParams& p);

// Stationary covariance matrix from A V + V A^T = -D, solved as the 36x36
// Kronecker-vectorized linear system with partial-pivot elimination, then
// symmetrized.  Throws UnstableDrift when stability(a) fails and
// SingularSystem when the residual certificate
//   |A V + V A^T + D|_inf <= 1e-10 |D|_inf
// cannot be met.
Mat6 solve_lyapunov(const Mat6& a, const Mat6& d, double omega_m);

// |A V + V A^T + D|_inf, the certificate checked by solve_lyapunov.
double lyapunov_residual(const Mat6& a, const Mat6& d, const Mat6& v);

// Smallest eigenvalue of V + i Omega / 2 (real, since the matrix is
// Hermitian).  Nonnegative up to tolerance for a physical state.
double physicality_margin(const Mat6& v);

// Bipartition of the three modes.  The pair order fixes which block is
// "first" in the reduced matrix; log_negativity is symmetric under swap.
enum class ModePair { atom_mirror, field_atom, mirror_field };

// 4x4 reduced covariance matrix of the chosen pair.
Mat4 reduce_bipartite(const Mat6& v, ModePair pair);

// Smallest symplectic eigenvalue of the partial transpose, closed form:
//   Sigma = det B + det B' - 2 det C,
//   eta^- = 2^{-1/2} sqrt(Sigma - sqrt(Sigma^2 - 4 det V)).
// A discriminant in [-1e-12 * max(1, Sigma^2), 0) is clamped to 0; anything
// more negative throws UnphysicalCM.
double min_symplectic_eigenvalue_pt(const Mat4& v);

// Same quantity by explicit partial transpose and the spectrum of
// i Omega V~; independent cross-check of the closed form.
double min_symplectic_eigenvalue_pt_direct(const Mat4& v);

// Logarithmic negativity E_N = max(0, -ln(2 eta^-)).
double log_negativity(const Mat4& v);

// Convenience: E_N of a pair straight from the full covariance matrix.
double log_negativity(const Mat6& v, ModePair pair);

}  // namespace triom
