#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "triom/params.hpp"

namespace triom {

enum class SweepVariable { delta_a, delta_f, eta, temperature, drive };

SweepVariable sweep_variable_from_string(const std::string& name);
const char* to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::delta_a;
  double from = 0.0;
  double to = 0.0;
  int points = 2;  // >= 2 (>= 1 when from == to)
};

// One operating point of an entanglement sweep.  On a per-point failure the
// numeric fields are NaN and `error` holds the reason; the sweep continues.
struct SweepRecord {
  double value = 0.0;     // swept variable at this point
  double en_am = 0.0;     // log-negativity, atom-mirror pair
  double en_fa = 0.0;     // log-negativity, field-atom pair
  double en_mf = 0.0;     // log-negativity, mirror-field pair
  bool stable = false;    // dual-route stability verdict
  double residual = 0.0;  // steady-state drift residual
  double physicality = 0.0;  // min eig(V + i Omega/2)
  std::string error;      // empty on success
};

// Evaluate the full pipeline (steady state -> stability -> covariance ->
// negativities) over a uniform grid of the chosen variable.  `jobs` worker
// threads split the grid; records always come back in grid order and the
// serialized output is byte-identical for any job count.  Unstable points
// report stable=false with NaN negativities (not an error).
std::vector<SweepRecord> run_sweep(const SystemConfig& config, const SweepSpec& spec,
                                   int jobs = 1);

// CSV with a header row, '\n' line endings and floats printed with 17
// significant digits (round-trip exact).
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRecord>& records);

// JSON document with the same content (NaN serializes as null).
void write_sweep_json(std::ostream& out, const SweepSpec& spec,
                      const std::vector<SweepRecord>& records);

// Apply a sweep override to a config (exactly one field).  Sweeping eta
// rescales G per rescale_coupling; sweeping temperature clears any direct
// n_th; sweeping drive sets drive_e.  Exposed for the CLI and tests.
SystemConfig apply_override(const SystemConfig& config, SweepVariable variable,
                            double value);

// 17-significant-digit float formatting shared by every writer.
std::string format_double(double x);

}  // namespace triom
