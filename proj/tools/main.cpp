// triom command-line front end: steady-state reports, entanglement sweeps,
// displacement spectra, stability maps, nonlinearity tables and the built-in
// self-test.  Exit codes: 0 success, 1 configuration/runtime error,
// 2 self-test failure.

#include <atomic>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "triom/triom.hpp"

namespace {

using triom::format_double;

// Stream selector: file when --out is given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw triom::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SteadyReport {
  triom::SystemParams params;
  triom::SteadyState ss;
  triom::StabilityVerdict verdict;
  double rendering_mismatch = 0.0;
  bool have_cm = false;
  double physicality = 0.0;
  double en_am = 0.0, en_fa = 0.0, en_mf = 0.0;
};

SteadyReport compute_steady(const triom::SystemConfig& cfg) {
  SteadyReport rep;
  rep.params = triom::derive_parameters(cfg);
  rep.ss = triom::solve_steady_state(rep.params, {rep.params.drive_e, 0.0});
  const triom::Mat6 a = triom::build_drift_matrix(rep.ss, rep.params);
  rep.verdict = triom::stability(a, rep.params.omega_m);
  rep.rendering_mismatch =
      triom::drift_rendering_mismatch(rep.ss, rep.params).maxCoeff();
  if (rep.verdict.stable) {
    const triom::Mat6 v =
        triom::solve_lyapunov(a, triom::build_diffusion_matrix(rep.params), rep.params.omega_m);
    rep.physicality = triom::physicality_margin(v);
    rep.en_am = triom::log_negativity(v, triom::ModePair::atom_mirror);
    rep.en_fa = triom::log_negativity(v, triom::ModePair::field_atom);
    rep.en_mf = triom::log_negativity(v, triom::ModePair::mirror_field);
    rep.have_cm = true;
  }
  return rep;
}

void write_steady_csv(std::ostream& out, const SteadyReport& r) {
  out << "alpha_re,alpha_im,b_re,b_im,c_re,c_im,delta_0f,xi_re,xi_im,residual,"
         "multiple_roots,stable,max_re_eig,drift_table_gap,physicality,en_am,en_fa,en_mf\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out << format_double(r.ss.alpha_s.real()) << ',' << format_double(r.ss.alpha_s.imag()) << ','
      << format_double(r.ss.b_s.real()) << ',' << format_double(r.ss.b_s.imag()) << ','
      << format_double(r.ss.c_s.real()) << ',' << format_double(r.ss.c_s.imag()) << ','
      << format_double(r.ss.delta_0f) << ',' << format_double(r.ss.xi.real()) << ','
      << format_double(r.ss.xi.imag()) << ',' << format_double(r.ss.residual) << ','
      << (r.ss.multiple_roots ? 1 : 0) << ',' << (r.verdict.stable ? 1 : 0) << ','
      << format_double(r.verdict.max_real_eigenvalue) << ','
      << format_double(r.rendering_mismatch) << ','
      << format_double(r.have_cm ? r.physicality : nan) << ','
      << format_double(r.have_cm ? r.en_am : nan) << ','
      << format_double(r.have_cm ? r.en_fa : nan) << ','
      << format_double(r.have_cm ? r.en_mf : nan) << '\n';
}

void write_steady_json(std::ostream& out, const SteadyReport& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  nlohmann::json doc{
      {"alpha", {{"re", r.ss.alpha_s.real()}, {"im", r.ss.alpha_s.imag()}}},
      {"b", {{"re", r.ss.b_s.real()}, {"im", r.ss.b_s.imag()}}},
      {"c", {{"re", r.ss.c_s.real()}, {"im", r.ss.c_s.imag()}}},
      {"delta_0f", r.ss.delta_0f},
      {"xi", {{"re", r.ss.xi.real()}, {"im", r.ss.xi.imag()}}},
      {"residual", r.ss.residual},
      {"multiple_roots", r.ss.multiple_roots},
      {"stable", r.verdict.stable},
      {"max_re_eig", r.verdict.max_real_eigenvalue},
      {"method_agreement", r.verdict.method_agreement},
      {"drift_table_gap", r.rendering_mismatch},
      {"physicality", r.have_cm ? r.physicality : nan},
      {"en_am", r.have_cm ? r.en_am : nan},
      {"en_fa", r.have_cm ? r.en_fa : nan},
      {"en_mf", r.have_cm ? r.en_mf : nan},
  };
  out << doc.dump(2) << '\n';
}

int run_steady(const std::string& config_path, const std::string& out_path,
               const std::string& format) {
  const SteadyReport rep = compute_steady(triom::load_config_file(config_path));
  OutputTarget target(out_path);
  if (format == "json")
    write_steady_json(target.stream(), rep);
  else
    write_steady_csv(target.stream(), rep);
  return 0;
}

int run_entangle_sweep(const std::string& config_path, const std::string& out_path,
                       const std::string& var, double from, double to, int points,
                       const std::string& format, int jobs) {
  const triom::SystemConfig cfg = triom::load_config_file(config_path);
  triom::SweepSpec spec;
  spec.variable = triom::sweep_variable_from_string(var);
  spec.from = from;
  spec.to = to;
  spec.points = points;
  const std::vector<triom::SweepRecord> records = triom::run_sweep(cfg, spec, jobs);
  OutputTarget target(out_path);
  if (format == "json")
    triom::write_sweep_json(target.stream(), spec, records);
  else
    triom::write_sweep_csv(target.stream(), spec, records);
  return 0;
}

int run_spectrum(const std::string& config_path, const std::string& out_path, double from,
                 double to, int points, const std::string& format) {
  const triom::SystemConfig cfg = triom::load_config_file(config_path);
  const triom::SystemParams p = triom::derive_parameters(cfg);
  const triom::SteadyState ss = triom::solve_steady_state(p, {p.drive_e, 0.0});
  const triom::Mat6 a = triom::build_drift_matrix(ss, p);
  const triom::Mat6 d = triom::build_diffusion_matrix(p);
  // The window is given in units of omega_m.
  const triom::SpectrumSeries series =
      triom::displacement_spectrum(a, d, from * p.omega_m, to * p.omega_m, points);

  OutputTarget target(out_path);
  if (format == "json") {
    nlohmann::json doc;
    doc["omega_over_omega_m"] = nlohmann::json::array();
    doc["s_q"] = nlohmann::json::array();
    for (std::size_t k = 0; k < series.omega.size(); ++k) {
      doc["omega_over_omega_m"].push_back(series.omega[k] / p.omega_m);
      doc["s_q"].push_back(series.s_q[k]);
    }
    doc["peaks"] = nlohmann::json::array();
    for (const triom::SpectralPeak& pk : series.peaks)
      doc["peaks"].push_back({{"omega_over_omega_m", pk.omega / p.omega_m},
                              {"height", pk.height},
                              {"prominence", pk.prominence}});
    doc["mode_count"] = series.mode_count;
    target.stream() << doc.dump(2) << '\n';
    return 0;
  }

  std::ostream& out = target.stream();
  out << "omega_over_omega_m,s_q\n";
  for (std::size_t k = 0; k < series.omega.size(); ++k)
    out << format_double(series.omega[k] / p.omega_m) << ',' << format_double(series.s_q[k])
        << '\n';

  // Peak annotations: separate sidecar when writing to a file, trailing
  // comment block on stdout otherwise.
  auto write_peaks = [&](std::ostream& ps, const char* prefix) {
    ps << prefix << "mode_count " << series.mode_count << '\n';
    for (const triom::SpectralPeak& pk : series.peaks)
      ps << prefix << "peak omega_over_omega_m=" << format_double(pk.omega / p.omega_m)
         << " height=" << format_double(pk.height)
         << " prominence=" << format_double(pk.prominence) << '\n';
  };
  if (!out_path.empty()) {
    std::ofstream ps(out_path + ".peaks", std::ios::binary);
    if (!ps) throw triom::ConfigError("cannot open sidecar '" + out_path + ".peaks'");
    write_peaks(ps, "");
  } else {
    write_peaks(out, "# ");
  }
  return 0;
}

int run_stability_map(const std::string& config_path, const std::string& out_path,
                      double da_from, double da_to, int da_points, double drive_from,
                      double drive_to, int drive_points, const std::string& format,
                      int jobs) {
  const triom::SystemConfig base = triom::load_config_file(config_path);
  if (da_points < 1 || drive_points < 1)
    throw triom::ConfigError("stability map needs at least one point per axis");

  struct Cell {
    double delta_a = 0.0, drive = 0.0;
    bool stable = false;
    double max_re = std::numeric_limits<double>::quiet_NaN();
    std::string error;
  };
  const int total = da_points * drive_points;
  std::vector<Cell> cells(total);

  auto evaluate = [&](int idx) {
    const int i = idx / drive_points, j = idx % drive_points;
    Cell& cell = cells[idx];
    cell.delta_a = da_points == 1 ? da_from : da_from + i * (da_to - da_from) / (da_points - 1);
    cell.drive =
        drive_points == 1 ? drive_from : drive_from + j * (drive_to - drive_from) / (drive_points - 1);
    try {
      triom::SystemConfig cfg =
          triom::apply_override(base, triom::SweepVariable::delta_a, cell.delta_a);
      cfg = triom::apply_override(cfg, triom::SweepVariable::drive, cell.drive);
      const triom::SystemParams p = triom::derive_parameters(cfg);
      const triom::SteadyState ss = triom::solve_steady_state(p, {p.drive_e, 0.0});
      const triom::StabilityVerdict v =
          triom::stability(triom::build_drift_matrix(ss, p), p.omega_m);
      cell.stable = v.stable;
      cell.max_re = v.max_real_eigenvalue;
    } catch (const std::exception& ex) {
      cell.error = ex.what();
    }
  };

  const int workers = std::max(1, std::min(jobs, total));
  if (workers == 1) {
    for (int idx = 0; idx < total; ++idx) evaluate(idx);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) evaluate(idx);
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  OutputTarget target(out_path);
  if (format == "json") {
    nlohmann::json doc;
    doc["records"] = nlohmann::json::array();
    for (const Cell& c : cells)
      doc["records"].push_back({{"delta_a", c.delta_a},
                                {"drive", c.drive},
                                {"stable", c.stable},
                                {"max_re_eig", c.max_re},
                                {"error", c.error}});
    target.stream() << doc.dump(2) << '\n';
    return 0;
  }
  std::ostream& out = target.stream();
  out << "delta_a,drive,stable,max_re_eig,error\n";
  for (const Cell& c : cells)
    out << format_double(c.delta_a) << ',' << format_double(c.drive) << ','
        << (c.stable ? 1 : 0) << ',' << format_double(c.max_re) << ',' << c.error << '\n';
  return 0;
}

int run_ftable(const std::string& out_path, int j_max, double eta, long nb_max,
               const std::string& var, double from, double to, int points, long nb_fixed,
               const std::string& format) {
  if (j_max < 0 || j_max > 12) throw triom::ConfigError("ftable needs 0 <= jmax <= 12");

  std::vector<std::pair<double, long>> grid;  // (eta, n_b) per row
  std::vector<double> first_column;
  std::string first_name;
  if (var == "eta") {
    if (points < 2) throw triom::ConfigError("eta table needs at least two points");
    first_name = "eta";
    for (int k = 0; k < points; ++k) {
      const double e = from + k * (to - from) / (points - 1);
      grid.emplace_back(e, nb_fixed);
      first_column.push_back(e);
    }
  } else if (var.empty()) {
    if (nb_max < 0) throw triom::ConfigError("ftable needs nb-max >= 0");
    first_name = "n_b";
    for (long nb = 0; nb <= nb_max; ++nb) {
      grid.emplace_back(eta, nb);
      first_column.push_back(static_cast<double>(nb));
    }
  } else {
    throw triom::ConfigError("ftable --var only supports 'eta'");
  }

  OutputTarget target(out_path);
  std::ostream& out = target.stream();
  if (format == "json") {
    nlohmann::json doc;
    doc["records"] = nlohmann::json::array();
    for (std::size_t r = 0; r < grid.size(); ++r) {
      nlohmann::json row{{first_name, first_column[r]}};
      for (int j = 0; j <= j_max; ++j)
        row["f_" + std::to_string(j)] =
            triom::nonlinearity_f(j, grid[r].second, grid[r].first);
      doc["records"].push_back(row);
    }
    out << doc.dump(2) << '\n';
    return 0;
  }
  out << first_name;
  for (int j = 0; j <= j_max; ++j) out << ",f_" << j;
  out << '\n';
  for (std::size_t r = 0; r < grid.size(); ++r) {
    out << format_double(first_column[r]);
    for (int j = 0; j <= j_max; ++j)
      out << ',' << format_double(triom::nonlinearity_f(j, grid[r].second, grid[r].first));
    out << '\n';
  }
  return 0;
}

int run_selftest_cmd(double drift_perturbation, bool diffusion_flip) {
  triom::SelfTestOptions options;
  options.drift_perturbation = drift_perturbation;
  options.diffusion_sign_flip = diffusion_flip;
  const triom::SelfTestReport report = triom::run_selftest(options);
  for (const triom::SelfTestCheck& c : report.checks)
    std::cout << (c.passed ? "PASS" : "FAIL") << ' ' << c.name << " - " << c.detail << '\n';
  std::cout << (report.all_passed ? "all checks passed" : "SELFTEST FAILED") << '\n';
  return report.all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-mode optomechanics toolkit (atom + cavity field + mirror)"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", var;
  double from = 0.0, to = 0.0;
  int points = 101, jobs = 1;

  auto add_io = [&](CLI::App* sub, bool need_config) {
    if (need_config)
      sub->add_option("--config", config_path, "parameter file")->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* steady = app.add_subcommand("steady", "solve and report one operating point");
  add_io(steady, true);

  CLI::App* sweep = app.add_subcommand("entangle-sweep", "entanglement along a parameter grid");
  add_io(sweep, true);
  sweep->add_option("--var", var, "swept variable")->required();
  sweep->add_option("--from", from, "first grid value")->required();
  sweep->add_option("--to", to, "last grid value")->required();
  sweep->add_option("--points", points, "grid size");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));

  double sp_from = -2.0, sp_to = 2.0;
  int sp_points = 2001;
  CLI::App* spectrum = app.add_subcommand("spectrum", "mirror displacement noise spectrum");
  add_io(spectrum, true);
  spectrum->add_option("--from", sp_from, "window start, units of omega_m");
  spectrum->add_option("--to", sp_to, "window end, units of omega_m");
  spectrum->add_option("--points", sp_points, "grid size");

  double da_from = 0.5, da_to = 1.5, dr_from = 0.0, dr_to = 0.0;
  int da_points = 21, dr_points = 21;
  CLI::App* smap = app.add_subcommand("stability-map", "verdict grid over (delta_a, drive)");
  add_io(smap, true);
  smap->add_option("--da-from", da_from, "delta_a axis start")->required();
  smap->add_option("--da-to", da_to, "delta_a axis end")->required();
  smap->add_option("--da-points", da_points, "delta_a axis size");
  smap->add_option("--drive-from", dr_from, "drive axis start")->required();
  smap->add_option("--drive-to", dr_to, "drive axis end")->required();
  smap->add_option("--drive-points", dr_points, "drive axis size");
  smap->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));

  int j_max = 3;
  double ft_eta = 0.1;
  long nb_max = 40, nb_fixed = 10;
  CLI::App* ftable = app.add_subcommand("ftable", "tabulate the nonlinearity functions f_j");
  add_io(ftable, false);
  ftable->add_option("--jmax", j_max, "largest order j");
  ftable->add_option("--eta", ft_eta, "Lamb-Dicke parameter for the n_b table");
  ftable->add_option("--nb-max", nb_max, "largest phonon number for the n_b table");
  ftable->add_option("--var", var, "set to 'eta' for an eta sweep at fixed n_b");
  ftable->add_option("--from", from, "eta sweep start");
  ftable->add_option("--to", to, "eta sweep end");
  ftable->add_option("--points", points, "eta sweep size");
  ftable->add_option("--nb", nb_fixed, "phonon number for the eta sweep");

  double inject_drift = 0.0;
  bool inject_dsign = false;
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--inject-drift-perturbation", inject_drift,
                       "fault injection: offset one drift entry");
  selftest->add_flag("--inject-diffusion-signflip", inject_dsign,
                     "fault injection: negate the diffusion matrix");

  try {
    app.parse(argc, argv);
    if (steady->parsed()) return run_steady(config_path, out_path, format);
    if (sweep->parsed())
      return run_entangle_sweep(config_path, out_path, var, from, to, points, format, jobs);
    if (spectrum->parsed())
      return run_spectrum(config_path, out_path, sp_from, sp_to, sp_points, format);
    if (smap->parsed())
      return run_stability_map(config_path, out_path, da_from, da_to, da_points, dr_from,
                               dr_to, dr_points, format, jobs);
    if (ftable->parsed())
      return run_ftable(out_path, j_max, ft_eta, nb_max, var, from, to, points, nb_fixed,
                        format);
    if (selftest->parsed()) return run_selftest_cmd(inject_drift, inject_dsign);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
