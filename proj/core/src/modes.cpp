#include "triom/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "triom/constants.hpp"
#include "triom/errors.hpp"

namespace triom {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
  double h_prev = 1.0;  // H_0
  if (n == 0) return h_prev;
  double h = 2.0 * x;   // H_1
  for (int k = 1; k < n; ++k) {
    double h_next = 2.0 * x * h - 2.0 * k * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

ModeAmplitude mode_profile(const ModeIndex& idx, double x, double y, double z,
                           const CavityGeometry& geom) {
  if (idx.m < 0 || idx.n < 0) throw std::invalid_argument("mode_profile: transverse orders must be >= 0");
  if (!(geom.length > 0.0) || !(geom.waist > 0.0) || !(geom.wavenumber > 0.0))
    throw std::invalid_argument("mode_profile: geometry must have positive L, w0, k0");

  const double x_r = geom.rayleigh_range();
  const double w = geom.waist * std::sqrt(1.0 + (x / x_r) * (x / x_r));
  const double rho2 = y * y + z * z;

  double log_norm = 0.0;  // log of sqrt(pi 2^{n+m-2} m! n! L)
  log_norm += 0.5 * (std::log(constants::pi) + (idx.n + idx.m - 2) * std::log(2.0) +
                     std::lgamma(idx.m + 1.0) + std::lgamma(idx.n + 1.0) +
                     std::log(geom.length));
  const double norm = std::exp(-log_norm);

  ModeAmplitude out;
  out.envelope = hermite(idx.n, std::numbers::sqrt2 * y / w) *
                 hermite(idx.m, std::numbers::sqrt2 * z / w) *
                 std::exp(-rho2 / (w * w)) * norm / w;

  // Gouy phase and wavefront curvature; R(x) = x + xR^2/x diverges at the
  // waist, where the curvature term is exactly 0.
  const double gouy = std::atan(x / x_r);
  double curvature = 0.0;
  if (x != 0.0) {
    const double radius = x + x_r * x_r / x;
    curvature = geom.wavenumber * rho2 / (2.0 * radius);
  }
  out.phase = geom.wavenumber * x - (idx.m + idx.n + 1) * gouy + curvature;
  return out;
}

double coupling_rate(const ModeIndex& idx, double x, double y, double z,
                     const CavityGeometry& geom, double g0) {
  ModeAmplitude mode = mode_profile(idx, x, y, z, geom);
  return g0 * mode.envelope * std::sin(mode.phase - idx.l * constants::pi / 2.0);
}

double axial_coupling_001(double mu, double epsilon, const CavityGeometry& geom,
                          double g0) {
  if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("axial_coupling_001: mu must lie in [0, 1]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("axial_coupling_001: epsilon must be positive");
  const double k0 = geom.wavenumber, w0 = geom.waist;
  const double x0 = epsilon * constants::pi / k0;
  const double x_r = geom.rayleigh_range();
  const double w_x0 = w0 * std::sqrt(1.0 + (x0 / x_r) * (x0 / x_r));
  const double envelope = 2.0 * g0 * std::exp(-mu * mu) /
                          (w_x0 * std::sqrt(constants::pi * geom.length));
  const double phase = k0 * x0 - std::atan(x0 / x_r) +
                       2.0 * mu * mu * x0 / (k0 * w0 * w0) - constants::pi / 2.0;
  return envelope * std::sin(phase);
}

namespace {

// Round an exact rational to the nearest double.  mpq_get_d truncates toward
// zero; one Dekker-style correction with the exact remainder restores
// round-to-nearest.
double rational_to_double(const mpq_class& q) {
  double d0 = q.get_d();
  mpq_class rem = q - mpq_class(d0);
  return d0 + rem.get_d();
}

// Exact evaluation of the alternating series for n_b <= 170: every
// coefficient n_b!/(m!(m+j)!(n_b-m)!) and the powers of the (exact dyadic)
// eta^2 are accumulated as rationals, so cancellation costs nothing.
double f_exact(int j, long n_b, double eta) {
  mpq_class eta2(eta);
  eta2 *= eta2;

  mpz_class num_fac;
  mpz_fac_ui(num_fac.get_mpz_t(), static_cast<unsigned long>(n_b));

  mpq_class acc(0);
  mpq_class power(1);  // (-eta^2)^m
  for (long m = 0; m <= n_b; ++m) {
    mpz_class den;
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_class tmp;
    mpz_fac_ui(tmp.get_mpz_t(), static_cast<unsigned long>(m + j));
    den *= tmp;
    mpz_fac_ui(tmp.get_mpz_t(), static_cast<unsigned long>(n_b - m));
    den *= tmp;

    mpq_class term(num_fac, den);
    term.canonicalize();
    acc += power * term;
    power *= -eta2;
  }
  return rational_to_double(acc);
}

// Log-magnitude route for large n_b: terms via lgamma, alternating signs,
// factoring out the largest magnitude before summing.
double f_lgamma(int j, long n_b, double eta) {
  const double log_eta2 = 2.0 * std::log(eta);
  const double lg_nb = std::lgamma(static_cast<double>(n_b) + 1.0);
  std::vector<double> logs(static_cast<size_t>(n_b) + 1);
  double log_max = -HUGE_VAL;
  for (long m = 0; m <= n_b; ++m) {
    double lm = m * log_eta2 + lg_nb - std::lgamma(m + 1.0) -
                std::lgamma(static_cast<double>(m) + j + 1.0) -
                std::lgamma(static_cast<double>(n_b - m) + 1.0);
    logs[static_cast<size_t>(m)] = lm;
    log_max = std::max(log_max, lm);
  }
  double sum = 0.0;
  for (long m = 0; m <= n_b; ++m) {
    double t = std::exp(logs[static_cast<size_t>(m)] - log_max);
    sum += (m % 2 == 0) ? t : -t;
  }
  return sum * std::exp(log_max);
}

}  // namespace

double nonlinearity_f(int j, long n_b, double eta) {
  if (j < 0) throw std::invalid_argument("nonlinearity_f: j must be >= 0");
  if (n_b < 0) throw std::invalid_argument("nonlinearity_f: n_b must be >= 0");
  if (eta < 0.0) throw std::invalid_argument("nonlinearity_f: eta must be >= 0");

  if (eta == 0.0) {
    // Only the m = 0 term survives: f_j = 1/j!.
    if (j <= 20) {
      double fac = 1.0;
      for (int i = 2; i <= j; ++i) fac *= i;
      return 1.0 / fac;
    }
    return std::exp(-std::lgamma(j + 1.0));
  }
  if (n_b <= 170) return f_exact(j, n_b, eta);
  return f_lgamma(j, n_b, eta);
}

double laguerre_recurrence(int n, int j, double x) {
  if (n < 0 || j < 0) throw std::invalid_argument("laguerre_recurrence: orders must be >= 0");
  double l_prev = 1.0;          // L_0^j
  if (n == 0) return l_prev;
  double l = 1.0 + j - x;       // L_1^j
  for (int k = 1; k < n; ++k) {
    double l_next = ((2.0 * k + 1.0 + j - x) * l - (k + j) * l_prev) / (k + 1.0);
    l_prev = l;
    l = l_next;
  }
  return l;
}

}  // namespace triom
