#pragma once

#include <iosfwd>
#include <string>

namespace triom {

// How the system is parameterized in the config file.
//   geometric:       cavity geometry + atom placement; couplings are derived.
//   effective_rates: eta, G, xi_0 given directly in rad/s.
//   dimensionless:   like effective_rates but every rate is normalized by the
//                    mechanical frequency (omega_m == 1 after derivation).
enum class InputLevel { geometric, effective_rates, dimensionless };

// Geometric-tier inputs (ignored in the other tiers).
struct GeometricInputs {
  double waist = 0.0;    // beam waist w0 at the cavity centre [m]
  double mu = 0.0;       // atom transverse offset as a fraction of the local beam radius, in [0, 1]
  double epsilon = 0.0;  // axial placement index: k0 * x0 = epsilon * pi
  double g0 = 0.0;       // bare atom-field dipole coupling [rad/s]
};

// Effective-rates / dimensionless-tier inputs (ignored in the geometric tier).
struct EffectiveInputs {
  double eta = 0.0;    // Lamb-Dicke parameter (0 <= eta < 1)
  double big_g = 0.0;  // tripartite atom-field-mirror coupling G [rad/s]
  double xi0 = 0.0;    // single-photon optomechanical coupling xi_0 [rad/s]
};

// Raw configuration as read from file.  Negative sentinel values mean
// "not provided" for the optional fields.
struct SystemConfig {
  InputLevel input_level = InputLevel::dimensionless;

  double omega_m = 0.0;         // mechanical angular frequency [rad/s]
  double quality_factor = 0.0;  // mechanical Q; gamma_m = omega_m / Q
  double mass = 0.0;            // effective mirror mass [kg] (geometric tier)
  double cavity_length = 0.0;   // cavity length L [m] (geometric tier)
  double kappa = 0.0;           // cavity field amplitude decay rate [rad/s]
  double gamma_a = 0.0;         // atomic amplitude decay rate [rad/s]
  double delta_a = 0.0;         // atomic detuning Delta_a [rad/s]
  double delta_f = 0.0;         // effective cavity detuning Delta_f [rad/s] (pinned, see solve_steady_state)
  double temperature = -1.0;    // mirror bath temperature [K]; < 0 means not provided
  double laser_power = -1.0;    // drive laser power [W]; < 0 means not provided
  double laser_wavenumber = 0.0;  // k0 [1/m]

  // Dimensionless-tier extras.
  double n_th_direct = -1.0;  // thermal phonon occupancy given directly; < 0 means not provided
  double omega_m_si = 0.0;    // physical mechanical frequency behind the normalized units [rad/s]; 0 = none
  double drive_e = -1.0;      // drive amplitude |E| given directly [rad/s]; < 0 means not provided

  GeometricInputs geometric;
  EffectiveInputs effective;
};

// Derived parameter set consumed by the solvers.  In the dimensionless tier
// every rate below is expressed in units of the input omega_m.
struct SystemParams {
  InputLevel input_level = InputLevel::dimensionless;

  double omega_m = 0.0;   // mechanical frequency [rad/s] (== 1 in the dimensionless tier)
  double gamma_m = 0.0;   // mechanical amplitude damping omega_m / Q [rad/s]
  double kappa = 0.0;     // cavity amplitude decay [rad/s]
  double gamma_a = 0.0;   // atomic amplitude decay [rad/s]
  double delta_a = 0.0;   // atomic detuning [rad/s]
  double delta_f = 0.0;   // effective cavity detuning [rad/s]

  double x_zpf = 0.0;     // mirror zero-point spread sqrt(hbar/(m omega_m)) [m]; 0 when not derivable
  double eta = 0.0;       // Lamb-Dicke parameter
  double g_mu = 0.0;      // atom-field coupling at the atom location [rad/s]
  double g_eff = 0.0;     // tripartite coupling G entering the equations of motion [rad/s]
  double xi0 = 0.0;       // single-photon optomechanical coupling [rad/s]
  double drive_e = 0.0;   // default drive amplitude |E| [rad/s]; 0 when not configured
  double n_th = 0.0;      // thermal phonon occupancy of the mirror bath
};

// Thermal occupancy 1/(exp(hbar w / kB T) - 1).  T == 0 (or an exponent large
// enough to underflow) gives exactly 0; negative T is a ConfigError.
double thermal_occupancy(double omega, double temperature);

// Parse a flat "key = value" UTF-8 config.  '#' starts a comment.  Keys with
// an "_hz" suffix are accepted for every rate field and converted by 2*pi.
// Unknown or duplicate keys are a hard ConfigError.
SystemConfig load_config(std::istream& in);
SystemConfig load_config_file(const std::string& path);

// Validate a config and derive the solver-facing parameter set.
SystemParams derive_parameters(const SystemConfig& config);

// Consistent tripartite coupling when the Lamb-Dicke parameter is moved away
// from the configured value: G scales as eta * exp(-eta^2/2) at fixed
// geometry.  Requires eta_ref > 0.
double rescale_coupling(double g_ref, double eta_ref, double eta);

const char* to_string(InputLevel level);

}  // namespace triom
