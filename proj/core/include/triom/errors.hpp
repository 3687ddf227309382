#pragma once

#include <stdexcept>
#include <string>

namespace triom {

// Raised for malformed config files, unknown keys, missing tier fields and
// out-of-range inputs.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Steady-state solver failed to converge within the iteration cap.
class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Steady-state iteration left the trust region (amplitude blow-up).
class DivergedAmplitude : public std::runtime_error {
 public:
  explicit DivergedAmplitude(const std::string& what) : std::runtime_error(what) {}
};

// Lyapunov solve refused: the drift matrix is not strictly stable.
class UnstableDrift : public std::runtime_error {
 public:
  explicit UnstableDrift(const std::string& what) : std::runtime_error(what) {}
};

// Linear system (Lyapunov or spectral) is singular or failed its residual
// certificate.
class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

// Covariance matrix violates the uncertainty principle beyond tolerance.
class UnphysicalCM : public std::runtime_error {
 public:
  explicit UnphysicalCM(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature failed to reach the requested accuracy.
class QuadratureNotConverged : public std::runtime_error {
 public:
  explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace triom
