#include "qrt/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "qrt/basis.hpp"

namespace qrt {

namespace {

ZpfHeuristic heuristic_of(const std::string& name) {
  if (name == "min_adag_a") return ZpfHeuristic::min_adag_a;
  if (name == "min_adag_adag") return ZpfHeuristic::min_adag_adag;
  return ZpfHeuristic::max_overlap;
}

KappaModel kappa_for(const CircuitParams& p, const LabeledSpectrum& spec) {
  KappaModel k;
  k.kappa_r = p.kappa_r;
  const double w_r0 = spec.energy(1, 0);
  const double w_r1 = spec.energy(1, 1) - spec.energy(0, 1);
  k.omega_r = 0.5 * (w_r0 + w_r1);
  k.filter = KappaModel::Filter{k.omega_r, p.kappa_f};
  return k;
}

void apply_constraint(RunConfig& cfg, const RunConfig& base) {
  if (cfg.sweep.constraint == "fix_resonator_frequency") {
    const double w_nom =
        std::sqrt(8.0 * base.circuit.E_Ca * base.circuit.E_Ja_eff());
    cfg.circuit.E_Ca = w_nom * w_nom / (8.0 * cfg.circuit.E_Ja_eff());
    const double check = std::sqrt(8.0 * cfg.circuit.E_Ca * cfg.circuit.E_Ja_eff());
    if (std::abs(check - w_nom) > 1e-3 * w_nom)
      throw std::runtime_error("sweep constraint violated: harmonic resonator frequency " +
                               std::to_string(check) + " vs nominal " + std::to_string(w_nom));
  }
}

}  // namespace

PointSolution solve_point(const RunConfig& cfg, bool with_qbar) {
  PointSolution out;
  out.params = cfg.circuit;
  out.params.E_Cab = cfg.circuit.e_cab_resolved();
  const ZpfHeuristic h = heuristic_of(cfg.solver.zpf_heuristic);
  const FockSpace space{cfg.solver.dim_a, cfg.solver.dim_b};

  if (cfg.solver.optimize_tilt) {
    TiltResult tr = optimize_tilt(out.params, cfg.solver.tilt_lo, cfg.solver.tilt_hi, h,
                                  cfg.solver.taylor_order);
    out.tilt = tr.tilt;
    out.basis = tr.basis;
    out.params.alpha = tr.tilt / 2.0;
  } else {
    out.tilt = out.params.tilt();
    out.basis = optimize_basis(out.params, out.tilt, h, cfg.solver.zpf_levels, 2,
                               cfg.solver.taylor_order);
  }

  const Eigen::MatrixXcd H = exact_hamiltonian_matrix(out.params, out.basis, space);
  out.spec = eigensolve_and_label(H, space);
  out.metrics = compute_metrics(out.spec, cfg.solver.n_star);
  out.kappa = kappa_for(out.params, out.spec);
  if (with_qbar) {
    const DecayMatrix D = build_decay_matrix(out.spec, out.kappa);
    const double dt = cfg.readout.pulse_len + cfg.readout.ringdown;
    out.qbar0 = qbar_estimate(D, out.spec, 0, cfg.readout.n_bar_target, dt);
    out.qbar1 = qbar_estimate(D, out.spec, 1, cfg.readout.n_bar_target, dt);
  }
  return out;
}

std::vector<std::string> sweep_columns() {
  return {"axis1",     "axis2",   "tilt",    "zpf_a",     "zpf_b",     "overlap_a",
          "overlap_b", "w10_GHz", "w01_GHz", "chi2_GHz",  "Kb_GHz",    "S0_GHz",
          "S1_GHz",    "qbar0",   "qbar1",   "flags",     "status"};
}

SweepResult run_sweep(const RunConfig& cfg) {
  const auto& ax1 = cfg.sweep.axis1;
  const auto& ax2 = cfg.sweep.axis2;
  if (!ax1.active()) throw ConfigError("run_sweep: sweep.axis1 not configured");

  std::vector<double> v1(ax1.points), v2(std::max(1, ax2.points));
  for (int i = 0; i < ax1.points; ++i)
    v1[i] = ax1.points == 1 ? ax1.start
                            : ax1.start + (ax1.stop - ax1.start) * i / double(ax1.points - 1);
  if (ax2.active())
    for (int i = 0; i < ax2.points; ++i)
      v2[i] = ax2.points == 1 ? ax2.start
                              : ax2.start + (ax2.stop - ax2.start) * i / double(ax2.points - 1);

  SweepResult res;
  res.axis1_name = ax1.parameter;
  res.axis2_name = ax2.active() ? ax2.parameter : "";
  const int n_points = int(v1.size() * v2.size());
  res.rows.resize(n_points);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_points) break;
      const int i1 = idx / int(v2.size());
      const int i2 = idx % int(v2.size());
      SweepRow& row = res.rows[idx];
      row.axis1 = v1[i1];
      row.axis2 = ax2.active() ? v2[i2] : 0.0;
      try {
        RunConfig point = cfg;
        point.solver.optimize_tilt = true;  // per-point tilt re-optimization
        set_parameter(point, ax1.parameter, v1[i1]);
        if (ax2.active()) set_parameter(point, ax2.parameter, v2[i2]);
        apply_constraint(point, cfg);
        PointSolution sol = solve_point(point);
        row.tilt = sol.tilt;
        row.zpf_a = sol.basis.zpf_a;
        row.zpf_b = sol.basis.zpf_b;
        row.overlap_a = sol.basis.overlap_a;
        row.overlap_b = sol.basis.overlap_b;
        row.w10 = sol.spec.energy(1, 0);
        row.w01 = sol.spec.energy(0, 1);
        row.two_chi = sol.metrics.cross_kerr_2chi;
        row.Kb = sol.metrics.self_kerr_Kb;
        row.spread_q0 = sol.metrics.spread_q0;
        row.spread_q1 = sol.metrics.spread_q1;
        row.qbar0 = sol.qbar0.qbar;
        row.qbar1 = sol.qbar1.qbar;
        std::string flags;
        for (auto [na, nb] : sol.metrics.ambiguity_flags)
          flags += "(" + std::to_string(na) + "," + std::to_string(nb) + ");";
        row.flags = flags;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        for (char& ch : row.error)
          if (ch == ',' || ch == '\n') ch = ';';
      }
    }
  };

  const int n_workers = cfg.sweep.workers > 0
                            ? cfg.sweep.workers
                            : int(std::max(1u, std::thread::hardware_concurrency()));
  if (n_workers == 1 || n_points == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(n_workers, n_points); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return res;
}

std::string sweep_csv(const SweepResult& result, const std::string& provenance) {
  std::ostringstream out;
  out.precision(12);
  std::istringstream prov(provenance);
  std::string line;
  while (std::getline(prov, line)) out << "# " << line << "\n";
  out << "# axis1=" << result.axis1_name;
  if (!result.axis2_name.empty()) out << " axis2=" << result.axis2_name;
  out << "\n";
  const auto cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
  for (const auto& r : result.rows) {
    out << r.axis1 << "," << r.axis2 << "," << r.tilt << "," << r.zpf_a << "," << r.zpf_b << ","
        << r.overlap_a << "," << r.overlap_b << "," << r.w10 << "," << r.w01 << ","
        << r.two_chi << "," << r.Kb << "," << r.spread_q0 << "," << r.spread_q1 << ","
        << r.qbar0 << "," << r.qbar1 << "," << (r.flags.empty() ? "-" : r.flags) << ","
        << (r.failed ? ("failed:" + r.error) : std::string("ok")) << "\n";
  }
  return out.str();
}

}  // namespace qrt
