#pragma once

#include <string>
#include <vector>

namespace triom {

// Fault-injection hooks for negative controls.  A nonzero
// drift_perturbation adds that value to one entry of the analytic drift
// matrix before the Jacobian comparison (the oracle must then fail);
// diffusion_sign_flip negates the diffusion matrix before the Lyapunov
// physicality check (which must then fail).
struct SelfTestOptions {
  double drift_perturbation = 0.0;
  bool diffusion_sign_flip = false;
};

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // one-line diagnostic (worst error, counts, ...)
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  bool all_passed = false;
};

// Run the built-in invariant suite: nonlinearity vs Laguerre recurrence,
// steady-state round trip and residual certificates, analytic-vs-finite-
// difference Jacobian, Lyapunov residual and physicality, closed-form vs
// direct negativity, spectrum/covariance consistency, and the dual-route
// stability cross-check on a deterministic random sample.
SelfTestReport run_selftest(const SelfTestOptions& options = {});

}  // namespace triom
