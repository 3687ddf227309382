#include "triom/steady_state.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "triom/errors.hpp"

namespace triom {

namespace {

using Vec6d = Eigen::Matrix<double, 6, 1>;
using Mat6d = Eigen::Matrix<double, 6, 6>;

double state_norm(const ClassicalState& s) {
  return std::sqrt(std::norm(s.alpha) + std::norm(s.b) + std::norm(s.c));
}

// Classical drift with the effective detuning held fixed: substituting
// Delta_0f = delta_f + 2 xi_0 Re(b) into the field equation cancels the
// radiation-pressure term, so the root of this reduced system is the fixed
// point whose effective detuning is exactly params.delta_f.
ClassicalState pinned_drift(const ClassicalState& s, const SystemParams& p, cplx drive) {
  const double nb = std::norm(s.b);
  const double f1 = 1.0 - 0.5 * p.eta * p.eta * nb;
  const cplx i(0.0, 1.0);
  ClassicalState d;
  d.c = -(p.gamma_a + i * p.delta_a) * s.c - i * p.g_eff * f1 * s.alpha * std::conj(s.b);
  d.alpha = -(p.kappa + i * p.delta_f) * s.alpha - i * p.g_eff * f1 * s.b * s.c + drive;
  d.b = -(p.gamma_m + i * p.omega_m) * s.b + i * p.xi0 * std::norm(s.alpha) -
        i * p.g_eff * ((1.0 - p.eta * p.eta * nb) * s.alpha * std::conj(s.c) -
                       0.5 * p.eta * p.eta * std::conj(s.alpha) * s.c * s.b * s.b);
  return d;
}

Vec6d pack(const ClassicalState& s) {
  Vec6d u;
  u << s.alpha.real(), s.alpha.imag(), s.b.real(), s.b.imag(), s.c.real(), s.c.imag();
  return u;
}

ClassicalState unpack(const Vec6d& u) {
  return {cplx(u[0], u[1]), cplx(u[2], u[3]), cplx(u[4], u[5])};
}

struct IterationBudget {
  long used = 0;
  long cap = 200000;
  void spend(long n, const char* where) {
    used += n;
    if (used > cap)
      throw NoConvergence(std::string("steady-state iteration cap exceeded in ") + where);
  }
};

void check_amplitude(const ClassicalState& s) {
  if (!(state_norm(s) < 1e12) || !std::isfinite(state_norm(s)))
    throw DivergedAmplitude("steady-state amplitude exceeded 1e12");
}

// Solve the (b, c) subsystem for a given field amplitude by damped fixed
// point with step-growth-triggered damping.  Returns false when the map is
// not contracting at any damping level (strong-coupling corner); the caller
// then switches to Newton on the full system.
bool inner_solve(const SystemParams& p, const cplx& alpha, cplx& b, cplx& c,
                 IterationBudget& budget) {
  const cplx i(0.0, 1.0);
  const cplx pole_b = p.gamma_m + i * p.omega_m;
  const cplx pole_c = p.gamma_a + i * p.delta_a;
  const double eta2 = p.eta * p.eta;
  const double tol = 1e-15;

  double mix = 1.0;
  double prev_step = HUGE_VAL;
  for (int k = 0; k < 400; ++k) {
    budget.spend(1, "inner fixed point");
    const double nb = std::norm(b);
    const cplx c_new = -i * p.g_eff * (1.0 - 0.5 * eta2 * nb) * alpha * std::conj(b) / pole_c;
    const cplx b_rhs = i * p.xi0 * std::norm(alpha) -
                       i * p.g_eff * ((1.0 - eta2 * nb) * alpha * std::conj(c_new) -
                                      0.5 * eta2 * std::conj(alpha) * c_new * b * b);
    const cplx b_new = b_rhs / pole_b;
    const double step = std::abs(b_new - b) + std::abs(c_new - c);
    if (step > prev_step) mix = std::max(0.5 * mix, 1.0 / 64.0);  // not contracting: damp
    prev_step = step;
    b += mix * (b_new - b);
    c += mix * (c_new - c);
    if (!std::isfinite(std::abs(b)) || std::abs(b) > 1e12)
      throw DivergedAmplitude("mirror amplitude exceeded 1e12");
    if (step <= tol * std::max(1.0, std::abs(b) + std::abs(c))) return true;
  }
  return false;
}

// Field amplitude consistent with (b, c): alpha (kappa + i delta_f) plus the
// atom back-action equals the drive.
cplx alpha_update(const SystemParams& p, const cplx& drive, const cplx& b) {
  const cplx i(0.0, 1.0);
  const double f1 = 1.0 - 0.5 * p.eta * p.eta * std::norm(b);
  const cplx g2 = p.g_eff * std::conj(b) * f1;
  const cplx denom = p.kappa + i * p.delta_f + std::norm(g2) / (p.gamma_a + i * p.delta_a);
  if (std::abs(denom) == 0.0)
    throw SingularSystem("field response pole: kappa + i delta_f + atom term vanishes");
  return drive / denom;
}

// Newton fallback on the pinned 6-real-dimensional system with a
// finite-difference Jacobian and step halving.
bool newton_polish(const SystemParams& p, const cplx& drive, ClassicalState& s,
                   IterationBudget& budget, double tol) {
  for (int it = 0; it < 50; ++it) {
    budget.spend(1, "newton");
    Vec6d f = pack(pinned_drift(s, p, drive));
    double f0 = f.norm();
    if (f0 <= tol) return true;

    Mat6d jac;
    Vec6d u = pack(s);
    for (int col = 0; col < 6; ++col) {
      const double h = 1e-7 * (1.0 + std::abs(u[col]));
      Vec6d up = u, um = u;
      up[col] += h;
      um[col] -= h;
      jac.col(col) = (pack(pinned_drift(unpack(up), p, drive)) -
                      pack(pinned_drift(unpack(um), p, drive))) /
                     (2.0 * h);
    }
    Eigen::PartialPivLU<Mat6d> lu(jac);
    Vec6d step = lu.solve(-f);
    if (!step.allFinite()) return false;

    double lambda = 1.0;
    for (int half = 0; half < 30; ++half) {
      ClassicalState trial = unpack(u + lambda * step);
      if (pack(pinned_drift(trial, p, drive)).norm() < f0) {
        s = trial;
        break;
      }
      lambda *= 0.5;
      if (half == 29) return false;  // no descent direction
    }
    check_amplitude(s);
  }
  return false;
}

// One damped fixed-point stage at a fixed drive, seeded from the previous
// homotopy step; falls back to Newton when the iteration stalls.  Returns
// false when neither route reaches the residual target, so the caller can
// shrink the continuation step.
bool converge_at_drive(const SystemParams& p, const cplx& drive, ClassicalState& s,
                       IterationBudget& budget, double tol) {
  const ClassicalState entry = s;
  double mix = 0.8;
  double prev_step = HUGE_VAL;
  for (int k = 0; k < 150; ++k) {
    budget.spend(1, "outer fixed point");
    if (!inner_solve(p, s.alpha, s.b, s.c, budget)) break;  // hand to Newton
    cplx alpha_new = alpha_update(p, drive, s.b);
    double step = std::abs(alpha_new - s.alpha);
    s.alpha += mix * (alpha_new - s.alpha);
    check_amplitude(s);
    if (step <= 1e-15 * std::max(1.0, std::abs(s.alpha))) {
      inner_solve(p, s.alpha, s.b, s.c, budget);
      if (pack(pinned_drift(s, p, drive)).norm() <= tol) return true;
      break;  // contraction hit its floor but the residual target is tighter
    }
    if (k > 20 && step > 0.9 * prev_step) mix = std::max(0.25, mix * 0.7);
    if (k > 60 && step > prev_step) break;  // not contracting; hand to Newton
    prev_step = step;
  }
  if (newton_polish(p, drive, s, budget, tol)) return true;
  s = entry;  // leave the caller a clean seed for a smaller step
  return false;
}

double pinned_residual(const SystemParams& p, const cplx& drive, const ClassicalState& s) {
  return pack(pinned_drift(s, p, drive)).norm();
}

}  // namespace

ClassicalState classical_drift(const ClassicalState& s, const SystemParams& p,
                               cplx drive, double delta_0f) {
  const double nb = std::norm(s.b);
  const double eta2 = p.eta * p.eta;
  const double f1 = 1.0 - 0.5 * eta2 * nb;
  const cplx i(0.0, 1.0);
  ClassicalState d;
  d.c = -(p.gamma_a + i * p.delta_a) * s.c - i * p.g_eff * f1 * s.alpha * std::conj(s.b);
  d.alpha = -(p.kappa + i * delta_0f) * s.alpha +
            i * p.xi0 * s.alpha * (s.b + std::conj(s.b)) - i * p.g_eff * f1 * s.b * s.c +
            drive;
  d.b = -(p.gamma_m + i * p.omega_m) * s.b + i * p.xi0 * std::norm(s.alpha) -
        i * p.g_eff * ((1.0 - eta2 * nb) * s.alpha * std::conj(s.c) -
                       0.5 * eta2 * std::conj(s.alpha) * s.c * s.b * s.b);
  return d;
}

SteadyState solve_steady_state(const SystemParams& p, cplx drive) {
  if (!(p.kappa > 0.0) && std::abs(drive) > 0.0)
    throw ConfigError("solve_steady_state needs kappa > 0 for a driven cavity");

  IterationBudget budget;
  ClassicalState s{0.0, 0.0, 0.0};

  // Continuation in the drive with adaptive step control: a stage that fails
  // both the fixed-point and the Newton route is retried at half the step.
  // The residual target scales with the state norm; it starts from the
  // absolute floor and tightens after the ramp when the norm is known.
  double t = 0.0;
  double dt = 0.05;
  while (t < 1.0) {
    dt = std::min(dt, 1.0 - t);
    const cplx e = drive * (t + dt);
    const double tol = 1e-13 * std::max(1.0, state_norm(s) * std::max(1.0, p.omega_m));
    if (converge_at_drive(p, e, s, budget, tol)) {
      t += dt;
      if (dt < 0.05) dt *= 2.0;
    } else {
      dt *= 0.5;
      if (dt < 1.0 / 65536.0)
        throw NoConvergence("drive continuation stalled: step size underflow");
    }
  }
  // Final polish at the true target.
  const double target = 1e-12 * std::max(1.0, state_norm(s) * p.omega_m);
  if (pinned_residual(p, drive, s) > 0.5 * target)
    newton_polish(p, drive, s, budget, 0.1 * target);

  SteadyState out;
  out.alpha_s = s.alpha;
  out.b_s = s.b;
  out.c_s = s.c;
  out.drive = drive;
  out.delta_f = p.delta_f;
  out.delta_0f = p.delta_f + 2.0 * p.xi0 * s.b.real();
  out.xi = 2.0 * p.xi0 * s.alpha;
  out.residual = pack(classical_drift(s, p, drive, out.delta_0f)).norm();
  if (out.residual > target)
    throw NoConvergence("steady-state residual certificate failed");

  // Multiplicity diagnostic: Newton from perturbed seeds; a distinct
  // converged root flags multistability.
  if (std::abs(drive) > 0.0) {
    const double ref = std::max({1.0, std::abs(s.alpha), std::abs(s.b), std::abs(s.c)});
    for (const cplx& factor : {cplx(1.6, 0.0), cplx(0.4, 0.0), cplx(0.0, 1.0)}) {
      ClassicalState seed{s.alpha * factor, s.b, s.c};
      try {
        IterationBudget side;  // separate small budget for the diagnostic
        side.cap = 2000;
        if (newton_polish(p, drive, seed, side, target)) {
          const double dist = std::abs(seed.alpha - s.alpha) + std::abs(seed.b - s.b) +
                              std::abs(seed.c - s.c);
          if (dist > 1e-6 * ref) {
            out.multiple_roots = true;
            break;
          }
        }
      } catch (const DivergedAmplitude&) {
        // a diverging probe seed says nothing about multiplicity
      } catch (const NoConvergence&) {
      }
    }
  }
  return out;
}

cplx required_drive(cplx alpha_s, const SystemParams& p) {
  const cplx i(0.0, 1.0);
  IterationBudget budget;
  cplx b = 0.0, c = 0.0;
  if (!inner_solve(p, alpha_s, b, c, budget))
    throw NoConvergence("mirror/atom subsystem did not converge for this field amplitude");
  const double f1 = 1.0 - 0.5 * p.eta * p.eta * std::norm(b);
  const cplx g2 = p.g_eff * std::conj(b) * f1;
  return alpha_s * (p.kappa + i * p.delta_f + std::norm(g2) / (p.gamma_a + i * p.delta_a));
}

}  // namespace triom
