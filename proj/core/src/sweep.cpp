#include "triom/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "triom/dynamics.hpp"
#include "triom/errors.hpp"
#include "triom/gaussian.hpp"
#include "triom/steady_state.hpp"

namespace triom {

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "delta_a") return SweepVariable::delta_a;
  if (name == "delta_f") return SweepVariable::delta_f;
  if (name == "eta") return SweepVariable::eta;
  if (name == "temperature") return SweepVariable::temperature;
  if (name == "drive") return SweepVariable::drive;
  throw ConfigError("unknown sweep variable '" + name +
                    "' (expected delta_a, delta_f, eta, temperature or drive)");
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::delta_a: return "delta_a";
    case SweepVariable::delta_f: return "delta_f";
    case SweepVariable::eta: return "eta";
    case SweepVariable::temperature: return "temperature";
    case SweepVariable::drive: return "drive";
  }
  return "?";
}

SystemConfig apply_override(const SystemConfig& config, SweepVariable variable,
                            double value) {
  SystemConfig cfg = config;
  switch (variable) {
    case SweepVariable::delta_a:
      cfg.delta_a = value;
      break;
    case SweepVariable::delta_f:
      cfg.delta_f = value;
      break;
    case SweepVariable::eta:
      if (cfg.input_level == InputLevel::geometric)
        throw ConfigError("eta sweep needs the effective_rates or dimensionless tier");
      cfg.effective.big_g = rescale_coupling(cfg.effective.big_g, cfg.effective.eta, value);
      cfg.effective.eta = value;
      break;
    case SweepVariable::temperature:
      cfg.temperature = value;
      cfg.n_th_direct = -1.0;  // the sweep value wins over a direct occupancy
      break;
    case SweepVariable::drive:
      cfg.drive_e = value;
      cfg.laser_power = -1.0;  // the sweep value wins over a configured power
      break;
  }
  return cfg;
}

namespace {

SweepRecord evaluate_point(const SystemConfig& base, SweepVariable variable, double value) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  SweepRecord rec;
  rec.value = value;
  rec.en_am = nan;
  rec.en_fa = nan;
  rec.en_mf = nan;
  rec.residual = nan;
  rec.physicality = nan;
  try {
    const SystemParams params = derive_parameters(apply_override(base, variable, value));
    const SteadyState ss = solve_steady_state(params, {params.drive_e, 0.0});
    rec.residual = ss.residual;

    const Mat6 a = build_drift_matrix(ss, params);
    rec.stable = stability(a, params.omega_m).stable;
    if (!rec.stable) return rec;  // not an error: no stationary state to report

    const Mat6 v = solve_lyapunov(a, build_diffusion_matrix(params), params.omega_m);
    rec.physicality = physicality_margin(v);
    rec.en_am = log_negativity(v, ModePair::atom_mirror);
    rec.en_fa = log_negativity(v, ModePair::field_atom);
    rec.en_mf = log_negativity(v, ModePair::mirror_field);
  } catch (const std::exception& ex) {
    rec.stable = false;
    rec.error = ex.what();
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SystemConfig& config, const SweepSpec& spec,
                                   int jobs) {
  if (spec.points < 1) throw ConfigError("sweep needs at least one point");
  if (spec.points == 1 && spec.from != spec.to)
    throw ConfigError("single-point sweep needs from == to");

  std::vector<double> grid(spec.points);
  for (int k = 0; k < spec.points; ++k)
    grid[k] = spec.points == 1
                  ? spec.from
                  : spec.from + k * (spec.to - spec.from) / (spec.points - 1);

  std::vector<SweepRecord> records(spec.points);
  const int workers = std::max(1, std::min(jobs, spec.points));
  if (workers == 1) {
    for (int k = 0; k < spec.points; ++k)
      records[k] = evaluate_point(config, spec.variable, grid[k]);
    return records;
  }

  // Each grid index is computed independently and written to its own slot,
  // so the result is identical for any worker count.
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next.fetch_add(1); k < spec.points; k = next.fetch_add(1))
      records[k] = evaluate_point(config, spec.variable, grid[k]);
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return records;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRecord>& records) {
  out << to_string(spec.variable) << ",en_am,en_fa,en_mf,stable,residual,physicality,error\n";
  for (const SweepRecord& r : records) {
    out << format_double(r.value) << ',' << format_double(r.en_am) << ','
        << format_double(r.en_fa) << ',' << format_double(r.en_mf) << ','
        << (r.stable ? 1 : 0) << ',' << format_double(r.residual) << ','
        << format_double(r.physicality) << ',' << csv_escape(r.error) << '\n';
  }
}

void write_sweep_json(std::ostream& out, const SweepSpec& spec,
                      const std::vector<SweepRecord>& records) {
  nlohmann::json doc;
  doc["variable"] = to_string(spec.variable);
  doc["from"] = spec.from;
  doc["to"] = spec.to;
  doc["points"] = spec.points;
  doc["records"] = nlohmann::json::array();
  for (const SweepRecord& r : records) {
    doc["records"].push_back({{"value", r.value},
                              {"en_am", r.en_am},
                              {"en_fa", r.en_fa},
                              {"en_mf", r.en_mf},
                              {"stable", r.stable},
                              {"residual", r.residual},
                              {"physicality", r.physicality},
                              {"error", r.error}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace triom
