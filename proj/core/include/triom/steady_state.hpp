#pragma once

#include <complex>

#include "triom/params.hpp"

namespace triom {

using cplx = std::complex<double>;

// Classical amplitudes of the three modes.
struct ClassicalState {
  cplx alpha;  // cavity field
  cplx b;      // mirror
  cplx c;      // atomic polarization (bosonized)
};

// Time derivative of (alpha, b, c) under the classical equations of motion
// with the phonon-number nonlinearity truncated at first order:
//   dc/dt = -(gamma_a + i Delta_a) c - i G (1 - eta^2/2 |b|^2) alpha conj(b)
//   da/dt = -(kappa + i Delta_0f) alpha + i xi_0 alpha (b + conj(b))
//           - i G (1 - eta^2/2 |b|^2) b c + E
//   db/dt = -(gamma_m + i omega_m) b + i xi_0 |alpha|^2
//           - i G [(1 - eta^2 |b|^2) alpha conj(c) - eta^2/2 conj(alpha) c b^2]
// delta_0f is the bare cavity detuning (the effective detuning params.delta_f
// plus the static radiation-pressure shift; see SteadyState).
ClassicalState classical_drift(const ClassicalState& s, const SystemParams& p,
                               cplx drive, double delta_0f);

// Self-consistent operating point.  The configured params.delta_f is treated
// as the pinned effective detuning; the bare detuning that realizes it,
// delta_0f = delta_f + 2 xi_0 Re(b_s), is reported alongside.
struct SteadyState {
  cplx alpha_s;         // field amplitude
  cplx b_s;             // mirror amplitude
  cplx c_s;             // atom amplitude
  cplx drive;           // drive E this state was solved for
  double delta_f = 0;   // effective cavity detuning (== params.delta_f)
  double delta_0f = 0;  // bare cavity detuning consistent with b_s
  cplx xi;              // field-enhanced optomechanical coupling 2 xi_0 alpha_s
  double residual = 0;  // |classical_drift| at the solution (euclidean over 6 components)
  bool multiple_roots = false;  // another fixed point was reached from perturbed seeds
};

// Find the fixed point of classical_drift connected to the undriven solution:
// the drive is ramped from 0 to its target in 20 homotopy steps, each solved
// by damped fixed-point iteration with a Newton fallback.  Throws
// NoConvergence past 1e4 total iterations and DivergedAmplitude if any
// amplitude exceeds 1e12.  The result satisfies
//   residual <= 1e-12 * max(1, |state| * omega_m).
SteadyState solve_steady_state(const SystemParams& p, cplx drive);

// Drive that makes alpha_s a steady field amplitude: the mirror/atom
// amplitudes are solved self-consistently for the given alpha_s and the drive
// follows by elimination,
//   E = alpha_s [kappa + i Delta_f + |G_2|^2/(gamma_a + i Delta_a)],
// with G_2 = G conj(b_s)(1 - eta^2/2 |b_s|^2).  Exact inverse of
// solve_steady_state on the zero-connected branch.
cplx required_drive(cplx alpha_s, const SystemParams& p);

}  // namespace triom
