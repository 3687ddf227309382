#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "triom/errors.hpp"
#include "triom/sweep.hpp"

using namespace triom;

namespace {

SystemConfig reference_config() {
  SystemConfig cfg;
  cfg.input_level = InputLevel::dimensionless;
  cfg.omega_m = 1.0;
  cfg.quality_factor = 1e5;
  cfg.kappa = 0.1;
  cfg.gamma_a = 0.05;
  cfg.delta_a = 1.0;
  cfg.delta_f = 1.0;
  cfg.n_th_direct = 100.0;
  cfg.drive_e = 30.0;
  cfg.effective.eta = 0.05;
  cfg.effective.big_g = 0.02;
  cfg.effective.xi0 = 0.005;
  return cfg;
}

std::string csv_of(const SweepSpec& spec, const std::vector<SweepRecord>& recs) {
  std::ostringstream out;
  write_sweep_csv(out, spec, recs);
  return out.str();
}

}  // namespace

TEST_CASE("sweep variable names round trip") {
  for (SweepVariable v : {SweepVariable::delta_a, SweepVariable::delta_f,
                          SweepVariable::eta, SweepVariable::temperature,
                          SweepVariable::drive})
    CHECK(sweep_variable_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(sweep_variable_from_string("kappa"), ConfigError);
}

TEST_CASE("apply_override edits exactly the intended field") {
  const SystemConfig base = reference_config();

  SUBCASE("detunings") {
    CHECK(apply_override(base, SweepVariable::delta_a, 0.7).delta_a == 0.7);
    CHECK(apply_override(base, SweepVariable::delta_f, -0.4).delta_f == -0.4);
  }
  SUBCASE("eta rescales the tripartite coupling consistently") {
    const SystemConfig cfg = apply_override(base, SweepVariable::eta, 0.1);
    CHECK(cfg.effective.eta == 0.1);
    CHECK(cfg.effective.big_g ==
          rescale_coupling(base.effective.big_g, base.effective.eta, 0.1));
    // at small eta the coupling is nearly linear in eta
    CHECK(cfg.effective.big_g / base.effective.big_g ==
          doctest::Approx(2.0).epsilon(0.01));
    // rescaling to the same eta is the identity
    CHECK(rescale_coupling(0.02, 0.05, 0.05) == doctest::Approx(0.02).epsilon(1e-15));
  }
  SUBCASE("eta sweep is undefined for derived couplings") {
    SystemConfig geo = base;
    geo.input_level = InputLevel::geometric;
    CHECK_THROWS_AS(apply_override(geo, SweepVariable::eta, 0.1), ConfigError);
  }
  SUBCASE("temperature displaces a direct occupancy") {
    const SystemConfig cfg = apply_override(base, SweepVariable::temperature, 1.2);
    CHECK(cfg.temperature == 1.2);
    CHECK(cfg.n_th_direct < 0.0);
  }
  SUBCASE("drive displaces a configured laser power") {
    SystemConfig powered = base;
    powered.laser_power = 0.005;
    const SystemConfig cfg = apply_override(powered, SweepVariable::drive, 12.0);
    CHECK(cfg.drive_e == 12.0);
    CHECK(cfg.laser_power < 0.0);
  }
}

TEST_CASE("sweep over the atomic detuning on a stable branch") {
  SweepSpec spec;
  spec.variable = SweepVariable::delta_a;
  spec.from = 0.8;
  spec.to = 1.2;
  spec.points = 11;

  const auto records = run_sweep(reference_config(), spec, 1);
  REQUIRE(records.size() == 11);
  CHECK(records.front().value == 0.8);
  CHECK(records.back().value == 1.2);
  for (const SweepRecord& r : records) {
    CHECK(r.error.empty());
    CHECK(r.stable);
    CHECK(r.en_am >= 0.0);
    CHECK(r.en_fa >= 0.0);
    CHECK(r.en_mf >= 0.0);
    CHECK(r.residual <= 1e-9);
    CHECK(r.physicality >= -1e-9);
  }
}

TEST_CASE("sweep output is byte-identical across runs and worker counts") {
  SweepSpec spec;
  spec.variable = SweepVariable::delta_a;
  spec.from = 0.8;
  spec.to = 1.2;
  spec.points = 21;
  const SystemConfig cfg = reference_config();

  const std::string serial_1 = csv_of(spec, run_sweep(cfg, spec, 1));
  const std::string serial_2 = csv_of(spec, run_sweep(cfg, spec, 1));
  const std::string parallel = csv_of(spec, run_sweep(cfg, spec, 4));
  CHECK(serial_1 == serial_2);
  CHECK(serial_1 == parallel);
}

TEST_CASE("per-point failures do not abort the sweep") {
  SystemConfig cfg = reference_config();
  cfg.delta_f = -1.0;  // amplifying side
  cfg.effective.xi0 = 0.1;

  SweepSpec spec;
  spec.variable = SweepVariable::drive;
  spec.from = 1.0;
  spec.to = 1e9;
  spec.points = 3;

  const auto records = run_sweep(cfg, spec, 1);
  REQUIRE(records.size() == 3);

  // weak drive: a valid fixed point that is simply unstable -- not an error
  CHECK(records[0].error.empty());
  CHECK_FALSE(records[0].stable);
  CHECK(std::isnan(records[0].en_am));

  // huge drive: the solver reports a runaway amplitude for this point only
  CHECK_FALSE(records[2].error.empty());
  CHECK_FALSE(records[2].stable);
  CHECK(std::isnan(records[2].en_am));
}

TEST_CASE("single-point sweeps and degenerate specs") {
  SweepSpec spec;
  spec.variable = SweepVariable::delta_a;
  spec.from = 1.0;
  spec.to = 1.0;
  spec.points = 1;
  const auto records = run_sweep(reference_config(), spec, 1);
  REQUIRE(records.size() == 1);
  CHECK(records[0].value == 1.0);

  spec.points = 0;
  CHECK_THROWS_AS(run_sweep(reference_config(), spec, 1), ConfigError);
  spec.points = 1;
  spec.to = 2.0;
  CHECK_THROWS_AS(run_sweep(reference_config(), spec, 1), ConfigError);
}

TEST_CASE("float formatting round-trips exactly") {
  for (double x : {1.0, 0.1, -3.5e-7, 2.718281828459045, 1e300, 0.0}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("CSV escapes error messages with commas and quotes") {
  SweepSpec spec;
  spec.variable = SweepVariable::drive;
  spec.from = 1.0;
  spec.to = 1.0;
  spec.points = 1;

  SweepRecord rec;
  rec.value = 1.0;
  rec.error = "bad, \"thing\"";
  const std::string csv = csv_of(spec, {rec});
  CHECK(csv.find("\"bad, \"\"thing\"\"\"") != std::string::npos);
  CHECK(csv.rfind("drive,en_am,en_fa,en_mf,stable,residual,physicality,error\n", 0) == 0);
}

TEST_CASE("JSON writer maps NaN to null and keeps booleans") {
  SweepSpec spec;
  spec.variable = SweepVariable::delta_a;
  spec.from = 1.0;
  spec.to = 1.0;
  spec.points = 1;

  SweepRecord rec;
  rec.value = 1.0;
  rec.en_am = std::nan("");
  rec.en_fa = 0.25;
  rec.stable = true;

  std::ostringstream out;
  write_sweep_json(out, spec, {rec});
  const nlohmann::json doc = nlohmann::json::parse(out.str());
  CHECK(doc["variable"] == "delta_a");
  CHECK(doc["records"].size() == 1);
  CHECK(doc["records"][0]["en_am"].is_null());
  CHECK(doc["records"][0]["en_fa"] == 0.25);
  CHECK(doc["records"][0]["stable"].is_boolean());
  CHECK(doc["records"][0]["stable"] == true);
}
