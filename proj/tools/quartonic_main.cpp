// quartonic: simulation toolkit for quarton-coupled superconducting-qubit readout.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrt/basis.hpp"
#include "qrt/decoherence.hpp"
#include "qrt/dynamics.hpp"
#include "qrt/sweep.hpp"
#include "qrt/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--config", c.config_path, "configuration file");
  sub->add_option("-o,--out", c.out_dir, "output directory");
  sub->add_option("-s,--set", c.overrides, "override config keys (key=value[ unit])")
      ->take_all();
}

qrt::RunConfig load_config(const CommonOpts& c) {
  qrt::RunConfig cfg = qrt::RunConfig::defaults();
  if (const char* env = std::getenv("QUARTONIC_OUT_DIR")) cfg.output_dir = env;
  if (!c.config_path.empty()) cfg = qrt::parse_config_file(c.config_path, cfg);
  for (const auto& ov : c.overrides) qrt::apply_override(cfg, ov);
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  cfg.circuit.validate();
  cfg.env.validate();
  return cfg;
}

std::filesystem::path prepare_out(const qrt::RunConfig& cfg, const std::string& sub) {
  const std::filesystem::path dir = std::filesystem::path(cfg.output_dir) / sub;
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / "resolved_config.cfg");
  f << "# quartonic " << qrt::kVersion << "\n" << qrt::serialize_config(cfg);
  return dir;
}

json provenance(const qrt::RunConfig& cfg) {
  return json{{"generator", std::string("quartonic ") + qrt::kVersion},
              {"config", qrt::serialize_config(cfg)}};
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream f(p);
  f << j.dump(2) << "\n";
}

json metrics_json(const qrt::PointSolution& sol) {
  return json{{"w10_GHz", sol.spec.energy(1, 0)},
              {"w01_GHz", sol.spec.energy(0, 1)},
              {"two_chi_GHz", sol.metrics.cross_kerr_2chi},
              {"Kb_GHz", sol.metrics.self_kerr_Kb},
              {"spread_q0_GHz", sol.metrics.spread_q0},
              {"spread_q1_GHz", sol.metrics.spread_q1},
              {"tilt", sol.tilt},
              {"zpf_a", sol.basis.zpf_a},
              {"zpf_b", sol.basis.zpf_b},
              {"overlap_a", sol.basis.overlap_a},
              {"overlap_b", sol.basis.overlap_b},
              {"n_star", sol.metrics.n_star},
              {"ambiguity_flags", sol.metrics.ambiguity_flags.size()}};
}

int cmd_spectrum(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "spectrum");
  qrt::PointSolution sol = qrt::solve_point(cfg);
  json j = provenance(cfg);
  j["metrics"] = metrics_json(sol);
  j["qbar"] = {{"q0", sol.qbar0.qbar}, {"q1", sol.qbar1.qbar}};
  write_json(dir / "metrics.json", j);
  std::cout << "w10 = " << sol.spec.energy(1, 0) << " GHz\n"
            << "w01 = " << sol.spec.energy(0, 1) << " GHz\n"
            << "2chi = " << sol.metrics.cross_kerr_2chi * 1e3 << " MHz\n"
            << "Kb = " << sol.metrics.self_kerr_Kb * 1e3 << " MHz\n"
            << "S0 = " << sol.metrics.spread_q0 * 1e3 << " MHz, S1 = "
            << sol.metrics.spread_q1 * 1e3 << " MHz\n"
            << "tilt = " << sol.tilt << "\n";
  std::cout << "wrote " << (dir / "metrics.json") << "\n";
  return kExitOk;
}

int cmd_sweep(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "sweep");
  qrt::SweepResult res = qrt::run_sweep(cfg);
  std::ofstream f(dir / "sweep.csv");
  f << qrt::sweep_csv(res, std::string("quartonic ") + qrt::kVersion + "\n" +
                               qrt::serialize_config(cfg));
  int failures = 0;
  for (const auto& r : res.rows) failures += r.failed ? 1 : 0;
  std::cout << "sweep: " << res.rows.size() << " points, " << failures
            << " failed; wrote " << (dir / "sweep.csv") << "\n";
  return kExitOk;
}

int cmd_qnd(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "qnd");
  qrt::PointSolution sol = qrt::solve_point(cfg);
  json j = provenance(cfg);
  j["qbar"] = {{"q0", sol.qbar0.qbar},
               {"q1", sol.qbar1.qbar},
               {"gamma0_per_ns", sol.qbar0.gamma},
               {"gamma1_per_ns", sol.qbar1.gamma},
               {"delta_t_ns", sol.qbar0.delta_t},
               {"n_bar", sol.qbar0.n_bar}};
  write_json(dir / "qnd.json", j);
  std::cout << "Qbar(|0>) = " << sol.qbar0.qbar << ", Qbar(|1>) = " << sol.qbar1.qbar
            << "\nwrote " << (dir / "qnd.json") << "\n";
  return kExitOk;
}

qrt::ReadoutModel make_model(const qrt::RunConfig& cfg, const qrt::PointSolution& sol) {
  qrt::ReadoutModel model =
      qrt::build_readout_model(sol.spec, sol.kappa, cfg.solver.i_star, cfg.solver.j_star,
                               cfg.solver.cluster_c, cfg.solver.prune_threshold);
  model.pulse_len = cfg.readout.pulse_len;
  model.ringdown = cfg.readout.ringdown;
  if (cfg.readout.omega_d > 0.0) model.omega_d = cfg.readout.omega_d;
  if (cfg.readout.eps0 >= 0.0)
    model.eps0 = cfg.readout.eps0;
  else
    qrt::calibrate_drive(model, cfg.readout.n_bar_target);
  return model;
}

int cmd_dynamics(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "dynamics");
  qrt::PointSolution sol = qrt::solve_point(cfg, false);
  qrt::ReadoutModel model = make_model(cfg, sol);
  json j = provenance(cfg);
  j["eps0_rad_per_ns"] = model.eps0;
  j["omega_d_GHz"] = model.omega_d;
  std::ofstream pops(dir / "populations.csv");
  pops << "# quartonic " << qrt::kVersion << "\n";
  pops << "time_ns,n_a,n_b,population,init_qubit\n";
  pops.precision(12);
  for (int k = 0; k <= 1; ++k) {
    qrt::LindbladResult r = qrt::run_lindblad(model, k, cfg.readout.me_dt);
    j["qnd_fidelity"][k == 0 ? "q0" : "q1"] = r.qnd_fidelity;
    j["max_trace_err"][k == 0 ? "q0" : "q1"] = r.max_trace_err;
    for (std::size_t t = 0; t < r.times.size(); ++t)
      for (int s = 0; s < model.dim(); ++s)
        pops << r.times[t] << "," << model.basis.labels[s].first << ","
             << model.basis.labels[s].second << "," << r.populations[t](s) << "," << k << "\n";
    std::cout << "QND fidelity |" << k << "> = " << r.qnd_fidelity * 100.0 << " %\n";
  }
  write_json(dir / "dynamics.json", j);
  std::cout << "wrote " << (dir / "dynamics.json") << "\n";
  return kExitOk;
}

int cmd_trajectories(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "trajectories");
  qrt::PointSolution sol = qrt::solve_point(cfg, false);
  qrt::ReadoutModel model = make_model(cfg, sol);
  qrt::TrajectoryEnsemble e0 = qrt::run_trajectories(model, 0, cfg.readout);
  qrt::TrajectoryEnsemble e1 = qrt::run_trajectories(model, 1, cfg.readout);
  qrt::ReadoutStats stats = qrt::readout_statistics(e0, e1);

  // integrated IQ points over the full window
  std::ofstream iq(dir / "iq.csv");
  iq << "# quartonic " << qrt::kVersion << "\n";
  iq << "trajectory,prepared,I,Q\n";
  iq.precision(12);
  const int nb = int(e0.bin_times.size());
  auto dump = [&](const qrt::TrajectoryEnsemble& e, int prep) {
    for (int t = 0; t < e.I.rows(); ++t) {
      double si = 0.0, sq = 0.0;
      for (int b = 0; b < nb; ++b) {
        si += stats.w_I[b] * e.I(t, b);
        sq += stats.w_Q[b] * e.Q(t, b);
      }
      iq << t << "," << prep << "," << si << "," << sq << "\n";
    }
  };
  dump(e0, 0);
  dump(e1, 1);

  json j = provenance(cfg);
  j["fidelity"] = {{"q0", stats.final_window.fid0}, {"q1", stats.final_window.fid1}};
  j["snr"] = stats.final_window.snr;
  j["windows_ns"] = stats.window_ns;
  j["fid0_vs_window"] = stats.fid0_vs_t;
  j["fid1_vs_window"] = stats.fid1_vs_t;
  j["snr_vs_window"] = stats.snr_vs_t;
  j["eps0_rad_per_ns"] = model.eps0;
  j["omega_d_GHz"] = model.omega_d;
  j["n_traj"] = cfg.readout.n_traj;
  j["seed"] = cfg.readout.seed;
  write_json(dir / "summary.json", j);
  std::cout << "readout fidelity |0> = " << stats.final_window.fid0 * 100.0 << " %, |1> = "
            << stats.final_window.fid1 * 100.0 << " %, SNR = " << stats.final_window.snr
            << "\nwrote " << (dir / "summary.json") << "\n";
  return kExitOk;
}

int cmd_decoherence(const qrt::RunConfig& cfg, bool skip_echo) {
  auto dir = prepare_out(cfg, "decoherence");
  qrt::PointSolution sol = qrt::solve_point(cfg, false);
  qrt::DecoherenceBudget b =
      qrt::compute_budget(sol.spec, sol.params, sol.basis, cfg.env, sol.kappa,
                          sol.metrics.cross_kerr_2chi, !skip_echo);
  json j = provenance(cfg);
  auto chan = [](double rate) {
    return json{{"rate_per_s", rate}, {"time_s", rate > 0 ? 1.0 / rate : 0.0}};
  };
  j["T1"] = {{"resistor", chan(b.resistor.rate_total)},
             {"resistor_charge", chan(b.resistor.rate_C)},
             {"resistor_quarton", chan(b.resistor.rate_Q)},
             {"quasiparticle", chan(b.qp_rate)},
             {"dielectric", chan(b.dielectric_rate)},
             {"flux", chan(b.flux.rate_total)},
             {"purcell", chan(b.purcell_rate)},
             {"total", chan(b.t1_rate_total)}};
  j["T2"] = {{"thermal_photon", chan(b.thermal_rate)},
             {"flux_echo",
              {{"T2_s", skip_echo ? 0.0 : b.echo.T2_s},
               {"lower_bound", b.echo.lower_bound},
               {"quarton_T2_s", b.echo.quarton.T2_s},
               {"ground_T2_s", b.echo.ground.T2_s}}},
             {"total_rate_per_s", b.t2_rate_total}};
  write_json(dir / "budget.json", j);

  std::ofstream csv(dir / "budget.csv");
  csv << "# quartonic " << qrt::kVersion << "\n";
  csv << "channel,rate_per_s,time_s\n";
  csv.precision(12);
  auto row = [&](const char* name, double rate) {
    csv << name << "," << rate << "," << (rate > 0 ? 1.0 / rate : 0.0) << "\n";
  };
  row("resistor", b.resistor.rate_total);
  row("quasiparticle", b.qp_rate);
  row("dielectric", b.dielectric_rate);
  row("flux_T1", b.flux.rate_total);
  row("purcell", b.purcell_rate);
  row("thermal_photon", b.thermal_rate);
  if (!skip_echo) row("flux_echo", 1.0 / b.echo.T2_s);
  std::cout << "1/G_resistor = " << 1.0 / b.resistor.rate_total << " s\n"
            << "T1_qp = " << 1e3 / b.qp_rate << " ms\n"
            << "T1_diel = " << 1e6 / b.dielectric_rate << " us\n"
            << "T1_flux = " << 1e3 / b.flux.rate_total << " ms\n"
            << "T2_thermal = " << 1e3 / b.thermal_rate << " ms\n";
  if (!skip_echo) std::cout << "T2_echo = " << b.echo.T2_s * 1e3 << " ms\n";
  std::cout << "wrote " << (dir / "budget.json") << "\n";
  return kExitOk;
}

int cmd_validate(const qrt::RunConfig& cfg) {
  auto dir = prepare_out(cfg, "validate");
  int failures = 0;
  auto check = [&](const char* name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  // ladder commutators at the configured truncation
  {
    const qrt::FockSpace s{cfg.solver.dim_a, cfg.solver.dim_b};
    const Eigen::MatrixXcd a = qrt::build_annihilation(s, qrt::Mode::a);
    Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    double max_err = 0.0;
    for (int na = 0; na < s.dim_a - 1; ++na)
      for (int nb = 0; nb < s.dim_b; ++nb) {
        const int i = s.index(na, nb);
        max_err = std::max(max_err, std::abs(comm(i, i) - 1.0));
      }
    check("commutator [a, adag] = 1 below truncation edge", max_err < 1e-12,
          "max dev " + std::to_string(max_err));
  }
  // capacitance transform reference matrix
  {
    const auto r = qrt::capacitance_transform(3.0, 7.5, 80.0, 70.0);
    const double vals[4] = {0.2236, 0.2657, 1.2913, 3.2284};
    double max_rel = 0.0;
    for (int i = 0; i < 4; ++i)
      max_rel = std::max(max_rel, std::abs(r.E_C(i, i) - vals[i]) / vals[i]);
    max_rel = std::max(max_rel, std::abs(r.E_C(0, 1) - 0.0092) / 0.0092);
    check("capacitance transform reference", max_rel < 5e-3,
          "max rel err " + std::to_string(max_rel));
  }
  // trace preservation on a short driven evolution
  try {
    qrt::PointSolution sol = qrt::solve_point(cfg, false);
    qrt::ReadoutModel model = make_model(cfg, sol);
    qrt::LindbladResult r = qrt::run_lindblad(model, 0, cfg.readout.me_dt, 1.0);
    check("master equation trace preservation", r.max_trace_err < 1e-8,
          "max |tr-1| " + std::to_string(r.max_trace_err));

    // bath table dump
    std::ofstream f(dir / "baths.csv");
    f << "# quartonic " << qrt::kVersion << "\n";
    f << "bath,omega_GHz,rate_per_ns,i,j,na_i,nb_i,na_j,nb_j,monitored\n";
    f.precision(12);
    for (int k = 0; k < int(model.diss.baths.size()); ++k)
      for (const auto& t : model.diss.baths[k].members)
        f << k << "," << t.omega << "," << t.rate << "," << t.i << "," << t.j << ","
          << model.basis.labels[t.i].first << "," << model.basis.labels[t.i].second << ","
          << model.basis.labels[t.j].first << "," << model.basis.labels[t.j].second << ","
          << (k == model.diss.k_star ? 1 : 0) << "\n";
    std::cout << "wrote " << (dir / "baths.csv") << "\n";
  } catch (const std::exception& e) {
    check("master equation trace preservation", false, e.what());
  }
  std::cout << (failures == 0 ? "validate: all checks passed\n"
                              : "validate: " + std::to_string(failures) + " failures\n");
  return failures == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("quartonic ") + qrt::kVersion +
               " - quarton-coupled readout simulation toolkit"};
  app.require_subcommand(1);

  CommonOpts copts;
  bool skip_echo = false;
  int n_traj_override = -1;
  long long seed_override = -1;

  auto* sp = app.add_subcommand("spectrum", "eigensolve, label and report readout metrics");
  add_common(sp, copts);
  auto* sw = app.add_subcommand("sweep", "parameter sweep with per-point re-optimization");
  add_common(sw, copts);
  auto* qn = app.add_subcommand("qnd", "analytic QND estimate");
  add_common(qn, copts);
  auto* dy = app.add_subcommand("dynamics", "deterministic master-equation readout");
  add_common(dy, copts);
  auto* tr = app.add_subcommand("trajectories", "stochastic heterodyne trajectories");
  add_common(tr, copts);
  tr->add_option("--n-traj", n_traj_override, "trajectories per prepared state");
  tr->add_option("--seed", seed_override, "RNG seed");
  auto* de = app.add_subcommand("decoherence", "decoherence budget");
  add_common(de, copts);
  de->add_flag("--skip-echo", skip_echo, "skip the echo Monte Carlo");
  auto* va = app.add_subcommand("validate", "built-in invariant suite");
  add_common(va, copts);

  CLI11_PARSE(app, argc, argv);

  try {
    qrt::RunConfig cfg = load_config(copts);
    if (n_traj_override > 0) cfg.readout.n_traj = n_traj_override;
    if (seed_override >= 0) cfg.readout.seed = std::uint64_t(seed_override);
    if (sp->parsed()) return cmd_spectrum(cfg);
    if (sw->parsed()) return cmd_sweep(cfg);
    if (qn->parsed()) return cmd_qnd(cfg);
    if (dy->parsed()) return cmd_dynamics(cfg);
    if (tr->parsed()) return cmd_trajectories(cfg);
    if (de->parsed()) return cmd_decoherence(cfg, skip_echo);
    if (va->parsed()) return cmd_validate(cfg);
  } catch (const qrt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qrt::LabelingError& e) {
    std::cerr << "labeling failure: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
