#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrt/circuit.hpp"
#include "qrt/dynamics.hpp"

namespace qrt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvironmentParams {
  double temperature = 45.0;     // mK
  double resistance = 10.0;      // uOhm
  double x_qp = 5e-9;
  double gap = 82.0;             // superconducting gap / 2pi, GHz
  double Q_diel = 7e6;
  double A_phi_quarton = 1.0;    // uPhi0 / sqrt(Hz) at 1 Hz
  double A_phi_ground = 5.0;     // uPhi0 / sqrt(Hz)
  double gamma_phi = 1.0;        // 1/f exponent, [0.8, 1.0]
  double thermal_ref = 12.5;     // GHz; resonator frequency entering nbar_t

  // echo simulation controls
  double echo_segment = 4000.0;  // us
  double echo_total = 100.0;     // s of synthesized series
  double echo_dt = 4.0;          // us sampling step
  std::uint64_t echo_seed = 99;

  void validate() const;
};

struct SolverParams {
  int dim_a = 25;
  int dim_b = 25;
  int taylor_order = 8;
  int n_star = 7;
  int i_star = 9;
  int j_star = 5;
  double cluster_c = 1.0;
  double prune_threshold = 1e-5;  // GHz (rate / 2pi)
  int zpf_levels = 10;
  std::string zpf_heuristic = "min_adag_a";
  double tilt_lo = 0.8;
  double tilt_hi = 1.3;
  bool optimize_tilt = false;     // re-optimize instead of using circuit.alpha
};

struct SweepSpec {
  struct Axis {
    std::string parameter;  // e.g. "circuit.E_Q"
    double start = 0.0, stop = 0.0;
    int points = 0;
    bool active() const { return points > 0 && !parameter.empty(); }
  };
  Axis axis1, axis2;
  std::string constraint = "none";  // or "fix_resonator_frequency"
  int workers = 0;                  // 0 = hardware concurrency
};

struct RunConfig {
  CircuitParams circuit;
  EnvironmentParams env;
  ReadoutConfig readout;
  SolverParams solver;
  SweepSpec sweep;
  std::string output_dir = "qrt_out";

  static RunConfig defaults() { return RunConfig{}; }
};

// Flat key-value format: "section.key = value [unit]", '#' comments.
// Unknown keys are rejected; dimensioned quantities require a unit token.
RunConfig parse_config(std::istream& in, const RunConfig& base = RunConfig::defaults());
RunConfig parse_config_file(const std::string& path, const RunConfig& base = RunConfig::defaults());
// Applies one "key=value[ unit]" override (CLI -s flag).
void apply_override(RunConfig& cfg, const std::string& assignment);
// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// Numeric sweep access to config parameters (used by the sweep driver).
double get_parameter(const RunConfig& cfg, const std::string& path);
void set_parameter(RunConfig& cfg, const std::string& path, double value);

}  // namespace qrt
