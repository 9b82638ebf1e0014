#pragma once

#include <string>
#include <vector>

#include "qrt/config.hpp"
#include "qrt/qnd.hpp"

namespace qrt {

struct SweepRow {
  double axis1 = 0.0, axis2 = 0.0;
  double tilt = 0.0, zpf_a = 0.0, zpf_b = 0.0;
  double overlap_a = 0.0, overlap_b = 0.0;
  double w10 = 0.0, w01 = 0.0, two_chi = 0.0, Kb = 0.0;
  double spread_q0 = 0.0, spread_q1 = 0.0;
  double qbar0 = 0.0, qbar1 = 0.0;
  std::string flags;   // semicolon-separated ambiguity labels
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string axis1_name, axis2_name;
};

// Column schema, fixed and versioned through the CSV header.
std::vector<std::string> sweep_columns();

// Per-point pipeline: apply axis values (+constraint), re-optimize basis and
// tilt, eigensolve + label, metrics and analytic QND estimates. Labeling
// failures mark the row failed and the sweep continues. Points run on a
// worker pool; results are ordered by grid index regardless of worker count.
SweepResult run_sweep(const RunConfig& cfg);

std::string sweep_csv(const SweepResult& result, const std::string& provenance);

// Single-point pipeline shared by the spectrum/qnd/dynamics CLI paths.
struct PointSolution {
  CircuitParams params;
  BasisChoice basis;
  double tilt = 0.0;
  LabeledSpectrum spec;
  SpectrumMetrics metrics;
  KappaModel kappa;
  QndEstimate qbar0, qbar1;
};

PointSolution solve_point(const RunConfig& cfg, bool with_qbar = true);

}  // namespace qrt
