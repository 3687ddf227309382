#include "triom/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "triom/constants.hpp"
#include "triom/errors.hpp"

namespace triom {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw ConfigError("trailing junk in value for '" + key + "': " + text);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse value for '" + key + "': " + text);
  }
}

InputLevel parse_level(const std::string& text) {
  if (text == "geometric") return InputLevel::geometric;
  if (text == "effective_rates") return InputLevel::effective_rates;
  if (text == "dimensionless") return InputLevel::dimensionless;
  throw ConfigError("unknown input_level '" + text + "'");
}

}  // namespace

const char* to_string(InputLevel level) {
  switch (level) {
    case InputLevel::geometric: return "geometric";
    case InputLevel::effective_rates: return "effective_rates";
    case InputLevel::dimensionless: return "dimensionless";
  }
  return "?";
}

double thermal_occupancy(double omega, double temperature) {
  if (temperature < 0.0) throw ConfigError("temperature must be nonnegative");
  if (omega <= 0.0) throw ConfigError("thermal_occupancy requires omega > 0");
  if (temperature == 0.0) return 0.0;
  double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  // expm1 overflows to +inf for large x; 1/inf underflows cleanly to 0.
  double e = std::expm1(x);
  if (!std::isfinite(e)) return 0.0;
  return 1.0 / e;
}

SystemConfig load_config(std::istream& in) {
  SystemConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;

  const double two_pi = 2.0 * constants::pi;

  // key -> (target, accepts _hz variant)
  struct Field {
    double* target;
    bool rate;  // rate/frequency fields accept a "_hz" spelled key, scaled by 2 pi
  };
  const std::vector<std::pair<std::string, Field>> fields = {
      {"omega_m", {&cfg.omega_m, true}},
      {"quality_factor", {&cfg.quality_factor, false}},
      {"mass", {&cfg.mass, false}},
      {"cavity_length", {&cfg.cavity_length, false}},
      {"kappa", {&cfg.kappa, true}},
      {"gamma_a", {&cfg.gamma_a, true}},
      {"delta_a", {&cfg.delta_a, true}},
      {"delta_f", {&cfg.delta_f, true}},
      {"temperature", {&cfg.temperature, false}},
      {"laser_power", {&cfg.laser_power, false}},
      {"laser_wavenumber", {&cfg.laser_wavenumber, false}},
      {"n_th", {&cfg.n_th_direct, false}},
      {"omega_m_si", {&cfg.omega_m_si, true}},
      {"drive_E", {&cfg.drive_e, true}},
      {"geometric.waist", {&cfg.geometric.waist, false}},
      {"geometric.mu", {&cfg.geometric.mu, false}},
      {"geometric.epsilon", {&cfg.geometric.epsilon, false}},
      {"geometric.g0", {&cfg.geometric.g0, true}},
      {"effective.eta", {&cfg.effective.eta, false}},
      {"effective.G", {&cfg.effective.big_g, true}},
      {"effective.xi_0", {&cfg.effective.xi0, true}},
  };

  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");

    if (key == "input_level") {
      cfg.input_level = parse_level(value);
      continue;
    }

    bool matched = false;
    for (const auto& [name, field] : fields) {
      if (key == name) {
        *field.target = parse_number(key, value);
        matched = true;
        break;
      }
      if (field.rate && key == name + "_hz") {
        if (seen.count(name))
          throw ConfigError("line " + std::to_string(lineno) + ": '" + key +
                            "' duplicates '" + name + "'");
        seen.insert(name);  // block the plain spelling appearing later too
        *field.target = two_pi * parse_number(key, value);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_config(in);
}

double rescale_coupling(double g_ref, double eta_ref, double eta) {
  if (eta_ref <= 0.0)
    throw ConfigError("coupling rescale needs a positive reference Lamb-Dicke parameter");
  if (eta < 0.0) throw ConfigError("Lamb-Dicke parameter must be nonnegative");
  return g_ref * (eta / eta_ref) * std::exp(-0.5 * (eta * eta - eta_ref * eta_ref));
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be nonnegative");
}

double derive_drive(const SystemConfig& cfg, double kappa, double omega_l) {
  // |E| = sqrt(2 kappa P / (hbar omega_l)) from input-output theory.
  if (cfg.drive_e >= 0.0) return cfg.drive_e;
  if (cfg.laser_power >= 0.0) {
    require_positive(omega_l, "laser frequency (laser_wavenumber)");
    return std::sqrt(2.0 * kappa * cfg.laser_power / (constants::hbar * omega_l));
  }
  return 0.0;
}

}  // namespace

SystemParams derive_parameters(const SystemConfig& cfg) {
  SystemParams p;
  p.input_level = cfg.input_level;

  if (!(cfg.omega_m > 0.0)) throw ConfigError("omega_m must be positive (NonPositiveFrequency)");
  require_positive(cfg.quality_factor, "quality_factor");
  require_nonnegative(cfg.kappa, "kappa");
  require_nonnegative(cfg.gamma_a, "gamma_a");

  switch (cfg.input_level) {
    case InputLevel::geometric: {
      const auto& g = cfg.geometric;
      require_positive(cfg.mass, "mass");
      require_positive(cfg.cavity_length, "cavity_length");
      require_positive(cfg.laser_wavenumber, "laser_wavenumber");
      require_positive(g.waist, "geometric.waist");
      require_nonnegative(g.g0, "geometric.g0");
      if (g.mu < 0.0 || g.mu > 1.0) throw ConfigError("geometric.mu must lie in [0, 1]");
      require_positive(g.epsilon, "geometric.epsilon");

      const double w0 = g.waist, k0 = cfg.laser_wavenumber, length = cfg.cavity_length;
      p.omega_m = cfg.omega_m;
      p.gamma_m = cfg.omega_m / cfg.quality_factor;
      p.kappa = cfg.kappa;
      p.gamma_a = cfg.gamma_a;
      p.delta_a = cfg.delta_a;
      p.delta_f = cfg.delta_f;
      p.x_zpf = std::sqrt(constants::hbar / (cfg.mass * cfg.omega_m));
      p.eta = 2.0 * constants::pi * g.mu * g.epsilon / (w0 * w0 * k0 * k0 * length) * p.x_zpf;
      if (p.eta >= 1.0)
        throw ConfigError("derived Lamb-Dicke parameter >= 1; outside the truncated model");
      // local beam radius at the atom's axial position x0 = eps*pi/k0
      const double x0 = g.epsilon * constants::pi / k0;
      const double x_rayleigh = 0.5 * w0 * w0 * k0;
      const double w_at_x0 = w0 * std::sqrt(1.0 + (x0 / x_rayleigh) * (x0 / x_rayleigh));
      p.g_mu = g.g0 * std::exp(-0.5 * p.eta * p.eta) * p.eta /
               (std::exp(g.mu) * w_at_x0 * std::sqrt(constants::pi * length));
      p.g_eff = p.g_mu;  // |<sigma_z>| = 1 in the bosonized regime
      p.xi0 = (constants::c_light * k0 / length) * p.x_zpf;
      p.drive_e = derive_drive(cfg, p.kappa, constants::c_light * k0);
      p.n_th = cfg.temperature >= 0.0 ? thermal_occupancy(p.omega_m, cfg.temperature) : 0.0;
      break;
    }

    case InputLevel::effective_rates: {
      const auto& e = cfg.effective;
      if (e.eta < 0.0 || e.eta >= 1.0) throw ConfigError("effective.eta must lie in [0, 1)");
      require_nonnegative(e.big_g, "effective.G");
      require_nonnegative(e.xi0, "effective.xi_0");

      p.omega_m = cfg.omega_m;
      p.gamma_m = cfg.omega_m / cfg.quality_factor;
      p.kappa = cfg.kappa;
      p.gamma_a = cfg.gamma_a;
      p.delta_a = cfg.delta_a;
      p.delta_f = cfg.delta_f;
      p.x_zpf = cfg.mass > 0.0 ? std::sqrt(constants::hbar / (cfg.mass * cfg.omega_m)) : 0.0;
      p.eta = e.eta;
      p.g_mu = e.big_g;
      p.g_eff = e.big_g;
      p.xi0 = e.xi0;
      p.drive_e = derive_drive(cfg, p.kappa, constants::c_light * cfg.laser_wavenumber);
      p.n_th = cfg.temperature >= 0.0 ? thermal_occupancy(p.omega_m, cfg.temperature) : 0.0;
      break;
    }

    case InputLevel::dimensionless: {
      const auto& e = cfg.effective;
      if (e.eta < 0.0 || e.eta >= 1.0) throw ConfigError("effective.eta must lie in [0, 1)");
      require_nonnegative(e.big_g, "effective.G");
      require_nonnegative(e.xi0, "effective.xi_0");

      // Normalize every rate by the input omega_m; the stored unit is omega_m.
      const double scale = cfg.omega_m;
      p.omega_m = 1.0;
      p.gamma_m = 1.0 / cfg.quality_factor;
      p.kappa = cfg.kappa / scale;
      p.gamma_a = cfg.gamma_a / scale;
      p.delta_a = cfg.delta_a / scale;
      p.delta_f = cfg.delta_f / scale;
      p.x_zpf = 0.0;
      p.eta = e.eta;
      p.g_mu = e.big_g / scale;
      p.g_eff = p.g_mu;
      p.xi0 = e.xi0 / scale;
      p.drive_e = cfg.drive_e >= 0.0 ? cfg.drive_e / scale : 0.0;
      if (cfg.n_th_direct >= 0.0) {
        p.n_th = cfg.n_th_direct;
      } else if (cfg.temperature >= 0.0) {
        if (!(cfg.omega_m_si > 0.0))
          throw ConfigError("temperature in the dimensionless tier needs omega_m_si "
                            "(or give n_th directly)");
        p.n_th = thermal_occupancy(cfg.omega_m_si, cfg.temperature);
      } else {
        p.n_th = 0.0;
      }
      break;
    }
  }
  return p;
}

}  // namespace triom
