#include "qrt/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace qrt {

int TruncatedEigenbasis::index_of(int n_a, int n_b) const {
  for (int k = 0; k < int(labels.size()); ++k)
    if (labels[k].first == n_a && labels[k].second == n_b) return k;
  return -1;
}

TruncatedEigenbasis truncate_eigenbasis(const LabeledSpectrum& spec, int i_star, int j_star) {
  TruncatedEigenbasis out;
  out.i_star = i_star;
  out.j_star = j_star;
  std::vector<int> eig_idx;
  for (int na = 0; na < i_star; ++na)
    for (int nb = 0; nb < j_star; ++nb) {
      if (!spec.has(na, nb))
        throw LabelingError("truncate_eigenbasis: missing label (" + std::to_string(na) +
                            "," + std::to_string(nb) + ")");
      out.labels.push_back({na, nb});
      eig_idx.push_back(spec.index(na, nb));
    }
  const int n = int(out.labels.size());
  out.energies.resize(n);
  const double e0 = spec.energies(spec.index(0, 0));
  Eigen::MatrixXcd V(spec.states.rows(), n);
  for (int k = 0; k < n; ++k) {
    out.energies(k) = spec.energies(eig_idx[k]) - e0;
    V.col(k) = spec.states.col(eig_idx[k]);
  }
  const Eigen::MatrixXcd a = build_annihilation(spec.space, Mode::a);
  const Eigen::MatrixXcd n0_fock = std::complex<double>(0.0, 1.0) * (a.adjoint() - a);
  out.n0 = V.adjoint() * n0_fock * V;
  return out;
}

ReadoutModel build_readout_model(const LabeledSpectrum& spec, const KappaModel& kappa,
                                 int i_star, int j_star, double cluster_c,
                                 double prune_threshold_GHz) {
  ReadoutModel m;
  m.basis = truncate_eigenbasis(spec, i_star, j_star);
  m.kappa = kappa;

  auto transitions = enumerate_transitions(m.basis.energies, m.basis.n0, kappa);
  const int anchor_lo = m.basis.index_of(0, 0);
  const int anchor_hi = m.basis.index_of(1, 0);
  DissipatorSet set = cluster_baths(std::move(transitions), cluster_c, kappa.kappa_r,
                                    {anchor_lo, anchor_hi});
  m.diss = prune(std::move(set), prune_threshold_GHz);
  m.monitored = m.diss.k_star;

  const int n = m.dim();
  m.sum_dd = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : m.diss.baths) {
    ReadoutModel::SparseOp op;
    for (const auto& t : b.members) {
      op.rows.push_back(t.i);
      op.cols.push_back(t.j);
      op.amps.push_back(std::sqrt(t.rate));
    }
    // d^dag d accumulates cross terms between same-bath transitions
    for (std::size_t x = 0; x < op.rows.size(); ++x)
      for (std::size_t y = 0; y < op.rows.size(); ++y)
        if (op.rows[x] == op.rows[y])
          m.sum_dd(op.cols[x], op.cols[y]) += op.amps[x] * op.amps[y];
    m.jumps.push_back(std::move(op));
  }

  // pulled resonator frequencies -> drive at the midpoint
  const double w_r0 = spec.energy(1, 0);
  const double w_r1 = spec.energy(1, 1) - spec.energy(0, 1);
  m.omega_d = 0.5 * (w_r0 + w_r1);
  m.pulse_len = 5.0;
  m.ringdown = 5.0;
  return m;
}

namespace {

// Lindblad RHS: H0 diagonal (rad/ns) + eps(t) n0, sparse jumps.
struct MeWorkspace {
  Eigen::MatrixXcd t1, t2;
};

void lindblad_rhs(const ReadoutModel& m, const Eigen::VectorXd& h0_rad,
                  const Eigen::MatrixXcd& rho, double t, Eigen::MatrixXcd& out,
                  MeWorkspace& ws) {
  const std::complex<double> im(0.0, 1.0);
  const int n = int(rho.rows());
  // -i [H0, rho] with diagonal H0
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      out(r, c) = -im * (h0_rad(r) - h0_rad(c)) * rho(r, c);
  const double eps = m.drive_amplitude(t);
  if (eps != 0.0) {
    ws.t1.noalias() = m.basis.n0 * rho;
    ws.t1.noalias() -= rho * m.basis.n0;
    out.noalias() += (-im * eps) * ws.t1;
  }
  // sum_k d rho d^dag (sparse) - 1/2 {sum_dd, rho}
  for (const auto& op : m.jumps) {
    const std::size_t nm = op.rows.size();
    for (std::size_t x = 0; x < nm; ++x)
      for (std::size_t y = 0; y < nm; ++y)
        out(op.rows[x], op.rows[y]) += op.amps[x] * op.amps[y] * rho(op.cols[x], op.cols[y]);
  }
  ws.t1.noalias() = m.sum_dd * rho;
  ws.t1.noalias() += rho * m.sum_dd;
  out.noalias() -= 0.5 * ws.t1;
}

}  // namespace

LindbladResult run_lindblad(const ReadoutModel& model, int init_qubit, double dt,
                            double t_total, int sample_stride) {
  const int n = model.dim();
  const int start = model.basis.index_of(0, init_qubit);
  if (start < 0) throw std::invalid_argument("run_lindblad: initial state outside basis");
  if (t_total < 0.0) t_total = model.pulse_len + model.ringdown;

  const Eigen::VectorXd h0_rad = kTwoPi * model.basis.energies;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  rho(start, start) = 1.0;

  LindbladResult res;
  res.init_qubit = init_qubit;
  MeWorkspace ws{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
  Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);

  Eigen::VectorXd nlab(n);
  for (int k = 0; k < n; ++k) nlab(k) = model.basis.labels[k].first;

  const int nsteps = int(std::llround(t_total / dt));
  auto sample = [&](double t) {
    res.times.push_back(t);
    Eigen::VectorXd pops = rho.diagonal().real();
    res.nbar.push_back(pops.dot(nlab));
    res.populations.push_back(pops);
    const double tr_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    res.max_trace_err = std::max(res.max_trace_err, tr_err);
    if (tr_err > 1e-6)
      throw std::runtime_error("run_lindblad: trace deviation " + std::to_string(tr_err) +
                               " (step size too large)");
  };
  sample(0.0);
  for (int s = 0; s < nsteps; ++s) {
    const double t = s * dt;
    lindblad_rhs(model, h0_rad, rho, t, k1, ws);
    tmp = rho + 0.5 * dt * k1;
    lindblad_rhs(model, h0_rad, tmp, t + 0.5 * dt, k2, ws);
    tmp = rho + 0.5 * dt * k2;
    lindblad_rhs(model, h0_rad, tmp, t + 0.5 * dt, k3, ws);
    tmp = rho + dt * k3;
    lindblad_rhs(model, h0_rad, tmp, t + dt, k4, ws);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s + 1) % sample_stride == 0 || s + 1 == nsteps) sample((s + 1) * dt);
  }
  // final-state diagnostics
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint().eval()));
    res.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  double qnd = 0.0;
  for (int k = 0; k < n; ++k)
    if (model.basis.labels[k].second == init_qubit) qnd += rho(k, k).real();
  res.qnd_fidelity = qnd;
  return res;
}

double calibrate_drive(ReadoutModel& model, double n_bar_target, double rel_tol,
                       int max_iter, double me_dt) {
  if (n_bar_target <= 0.0) {
    model.eps0 = 0.0;
    return 0.0;
  }
  // chi from the pulled-frequency split encoded in the truncated energies
  const auto& b = model.basis;
  const double w_r0 = b.energies(b.index_of(1, 0));
  const double w_r1 = b.energies(b.index_of(1, 1)) - b.energies(b.index_of(0, 1));
  const double chi_rad = kTwoPi * 0.5 * std::abs(w_r1 - w_r0);
  const double kappa_rad = kTwoPi * model.kappa.kappa_r;
  double eps0 = std::sqrt(n_bar_target * (chi_rad * chi_rad + kappa_rad * kappa_rad / 4.0));

  const double t_settle = std::max(3.0, 6.0 / model.kappa.kappa_r * 0.159);
  double nbar = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    model.eps0 = eps0;
    ReadoutModel probe = model;
    probe.pulse_len = t_settle + 1.0;  // hold the drive on for the whole probe
    probe.ringdown = 0.0;
    double acc = 0.0;
    for (int k = 0; k <= 1; ++k) {
      auto r = run_lindblad(probe, k, me_dt, t_settle, 100);
      // steady-state estimate: average over the trailing quarter
      const std::size_t n = r.nbar.size();
      double s = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = (3 * n) / 4; i < n; ++i, ++cnt) s += r.nbar[i];
      acc += s / double(cnt);
    }
    nbar = 0.5 * acc;
    if (std::abs(nbar - n_bar_target) <= rel_tol * n_bar_target) {
      model.eps0 = eps0;
      return eps0;
    }
    eps0 *= std::sqrt(n_bar_target / std::max(nbar, 1e-6));
  }
  throw std::runtime_error("calibrate_drive: no convergence after " +
                           std::to_string(max_iter) + " iterations (last nbar = " +
                           std::to_string(nbar) + ")");
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4b49c26b9edb5ULL;
  return x ^ (x >> 31);
}

struct SseScratch {
  Eigen::VectorXcd dpsi, tmp;
};

}  // namespace

TrajectoryEnsemble run_trajectories(const ReadoutModel& model, int init_qubit,
                                    const ReadoutConfig& cfg) {
  const int n = model.dim();
  const int start = model.basis.index_of(0, init_qubit);
  if (start < 0) throw std::invalid_argument("run_trajectories: initial state outside basis");
  if (model.monitored < 0) throw std::invalid_argument("run_trajectories: no monitored bath");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) throw std::invalid_argument("eta must be in (0,1]");

  const double t_end = model.pulse_len;
  const double dt_meas = 1.0 / (5.0 * model.omega_d);  // ns
  const int n_bins = int(std::ceil(t_end / dt_meas));
  const int sub = std::max(1, cfg.substeps);
  const double dt = dt_meas / sub;

  TrajectoryEnsemble ens;
  ens.init_qubit = init_qubit;
  ens.n_traj = cfg.n_traj;
  ens.bin_dt = dt_meas;
  ens.bin_times.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) ens.bin_times[b] = (b + 0.5) * dt_meas;
  ens.I.setZero(cfg.n_traj, n_bins);
  ens.Q.setZero(cfg.n_traj, n_bins);
  ens.mean_populations.setZero(n_bins, n);

  const Eigen::VectorXd h0_rad = kTwoPi * model.basis.energies;
  const int n_ch = int(model.jumps.size());
  const double record_noise = 1.0 / std::sqrt(cfg.eta);

  std::vector<Eigen::MatrixXd> pop_acc;
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string fail_msg;
  std::mutex fail_mutex;
  std::vector<double> drift(cfg.n_traj, 0.0);

  const int n_threads = cfg.threads > 0
                            ? cfg.threads
                            : std::max(1u, std::thread::hardware_concurrency());
  pop_acc.assign(n_threads, Eigen::MatrixXd::Zero(n_bins, n));

  auto worker = [&](int tid) {
    Eigen::VectorXcd psi(n), dpsi(n);
    std::vector<std::complex<double>> dval(n_ch);
    std::vector<std::complex<double>> incr;
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) break;
      const int traj = next.fetch_add(1);
      if (traj >= cfg.n_traj) break;
      try {
      std::mt19937_64 rng(splitmix64(cfg.seed ^ (std::uint64_t(init_qubit) << 48) ^
                                     std::uint64_t(traj)));
      std::normal_distribution<double> gauss(0.0, 1.0);

      psi.setZero();
      psi(start) = 1.0;
      double max_drift = 0.0;
      const double sqrt_half_dt = std::sqrt(0.5 * dt);
      for (int b = 0; b < n_bins; ++b) {
        std::complex<double> rec(0.0, 0.0);
        for (int s = 0; s < sub; ++s) {
          const double t = (double(b) * sub + s) * dt;
          // deterministic part: dpsi = -i H psi + QSD drift
          const double eps = model.drive_amplitude(t);
          for (int r = 0; r < n; ++r) dpsi(r) = std::complex<double>(0.0, -h0_rad(r)) * psi(r);
          if (eps != 0.0)
            dpsi.noalias() += std::complex<double>(0.0, -eps) * (model.basis.n0 * psi);
          double e_norm2 = 0.0;
          for (int c = 0; c < n_ch; ++c) {
            const auto& op = model.jumps[c];
            std::complex<double> e(0.0, 0.0);  // <d_c>
            for (std::size_t x = 0; x < op.rows.size(); ++x)
              e += std::conj(psi(op.rows[x])) * op.amps[x] * psi(op.cols[x]);
            dval[c] = e;
            e_norm2 += std::norm(e);
            const std::complex<double> ec = std::conj(e);
            for (std::size_t x = 0; x < op.rows.size(); ++x)
              dpsi(op.rows[x]) += ec * op.amps[x] * psi(op.cols[x]);
          }
          dpsi.noalias() -= 0.5 * (model.sum_dd * psi);
          dpsi -= (0.5 * e_norm2) * psi;
          psi += dt * dpsi;
          // stochastic part: (d_c - <d_c>) psi dxi_c, E|dxi|^2 = dt
          for (int c = 0; c < n_ch; ++c) {
            const auto& op = model.jumps[c];
            const std::complex<double> dxi(sqrt_half_dt * gauss(rng), sqrt_half_dt * gauss(rng));
            const std::size_t nm = op.rows.size();
            incr.resize(nm);
            for (std::size_t x = 0; x < nm; ++x) incr[x] = op.amps[x] * psi(op.cols[x]);
            psi -= dxi * dval[c] * psi;
            for (std::size_t x = 0; x < nm; ++x) psi(op.rows[x]) += dxi * incr[x];
            if (c == model.monitored) {
              // heterodyne record: dR = <d> dt + conj(dxi)/sqrt(eta), demodulated
              const std::complex<double> dem =
                  std::polar(1.0, kTwoPi * model.omega_d * t);
              rec += dem * (dval[c] * dt + std::conj(dxi) * record_noise);
            }
          }
          const double nrm = psi.norm();
          max_drift = std::max(max_drift, std::abs(nrm - 1.0));
          if (std::abs(nrm - 1.0) > 0.05)
            throw std::runtime_error("run_trajectories: norm drift " + std::to_string(nrm - 1.0) +
                                     " per step; increase substeps");
          psi /= nrm;
        }
        ens.I(traj, b) = rec.real() / dt_meas;
        ens.Q(traj, b) = rec.imag() / dt_meas;
        for (int k = 0; k < n; ++k) pop_acc[tid](b, k) += std::norm(psi(k));
      }
      drift[traj] = max_drift;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        failed.store(true);
        if (fail_msg.empty()) fail_msg = e.what();
      }
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(fail_msg);
  for (const auto& acc : pop_acc) ens.mean_populations += acc;
  ens.mean_populations /= double(cfg.n_traj);
  ens.max_norm_drift = *std::max_element(drift.begin(), drift.end());
  return ens;
}

GaussianAssignment assign_gaussian(const std::vector<double>& s0,
                                   const std::vector<double>& s1) {
  auto stats = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= double(std::max<std::size_t>(1, v.size() - 1));
    return std::pair{m, std::sqrt(var)};
  };
  GaussianAssignment g;
  std::tie(g.mu0, g.sigma0) = stats(s0);
  std::tie(g.mu1, g.sigma1) = stats(s1);
  const double sep = std::abs(g.mu1 - g.mu0);
  g.low_separation = sep < 0.1 * std::max(g.sigma0, g.sigma1);
  g.snr = sep / (0.5 * (g.sigma0 + g.sigma1));

  // equal-likelihood threshold between the two fitted Gaussians
  double thr;
  if (std::abs(g.sigma0 - g.sigma1) < 1e-12 * (g.sigma0 + g.sigma1)) {
    thr = 0.5 * (g.mu0 + g.mu1);
  } else {
    const double a = 1.0 / (2 * g.sigma1 * g.sigma1) - 1.0 / (2 * g.sigma0 * g.sigma0);
    const double bq = g.mu0 / (g.sigma0 * g.sigma0) - g.mu1 / (g.sigma1 * g.sigma1);
    const double cq = g.mu1 * g.mu1 / (2 * g.sigma1 * g.sigma1) -
                      g.mu0 * g.mu0 / (2 * g.sigma0 * g.sigma0) + std::log(g.sigma1 / g.sigma0);
    const double disc = bq * bq - 4 * a * cq;
    if (disc < 0.0) {
      thr = 0.5 * (g.mu0 + g.mu1);
    } else {
      const double r1 = (-bq + std::sqrt(disc)) / (2 * a);
      const double r2 = (-bq - std::sqrt(disc)) / (2 * a);
      const double lo = std::min(g.mu0, g.mu1), hi = std::max(g.mu0, g.mu1);
      thr = (r1 >= lo && r1 <= hi) ? r1 : r2;
    }
  }
  g.threshold = thr;
  auto ncdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  if (g.mu0 <= g.mu1) {
    g.fid0 = ncdf((thr - g.mu0) / g.sigma0);
    g.fid1 = 1.0 - ncdf((thr - g.mu1) / g.sigma1);
  } else {
    g.fid0 = 1.0 - ncdf((thr - g.mu0) / g.sigma0);
    g.fid1 = ncdf((thr - g.mu1) / g.sigma1);
  }
  return g;
}

ReadoutStats readout_statistics(const TrajectoryEnsemble& e0, const TrajectoryEnsemble& e1,
                                std::vector<double> windows_ns) {
  if (e0.bin_times.size() != e1.bin_times.size())
    throw std::invalid_argument("readout_statistics: mismatched ensembles");
  const int n_bins = int(e0.bin_times.size());
  const double t_max = e0.bin_times.back() + 0.5 * e0.bin_dt;
  if (windows_ns.empty())
    for (double w = 1.0; w <= t_max + 1e-9; w += 1.0) windows_ns.push_back(w);

  const Eigen::VectorXd mI0 = e0.I.colwise().mean(), mI1 = e1.I.colwise().mean();
  const Eigen::VectorXd mQ0 = e0.Q.colwise().mean(), mQ1 = e1.Q.colwise().mean();

  ReadoutStats out;
  out.window_ns = windows_ns;
  auto eval_window = [&](double T) {
    int nb = 0;
    while (nb < n_bins && e0.bin_times[nb] <= T) ++nb;
    Eigen::VectorXd wI(nb), wQ(nb);
    for (int b = 0; b < nb; ++b) {
      wI(b) = std::abs(mI1(b) - mI0(b));
      wQ(b) = std::abs(mQ1(b) - mQ0(b));
    }
    const double normI = wI.sum(), normQ = wQ.sum();
    if (normI > 0) wI /= normI;
    if (normQ > 0) wQ /= normQ;
    auto integrate = [&](const TrajectoryEnsemble& e) {
      std::vector<std::pair<double, double>> pts(e.I.rows());
      for (int t = 0; t < e.I.rows(); ++t) {
        double si = 0, sq = 0;
        for (int b = 0; b < nb; ++b) {
          si += wI(b) * e.I(t, b);
          sq += wQ(b) * e.Q(t, b);
        }
        pts[t] = {si, sq};
      }
      return pts;
    };
    auto p0 = integrate(e0), p1 = integrate(e1);
    // project onto the axis through the two means
    double cx0 = 0, cy0 = 0, cx1 = 0, cy1 = 0;
    for (auto& p : p0) {
      cx0 += p.first;
      cy0 += p.second;
    }
    for (auto& p : p1) {
      cx1 += p.first;
      cy1 += p.second;
    }
    cx0 /= p0.size();
    cy0 /= p0.size();
    cx1 /= p1.size();
    cy1 /= p1.size();
    double ax = cx1 - cx0, ay = cy1 - cy0;
    const double alen = std::hypot(ax, ay);
    if (alen > 0) {
      ax /= alen;
      ay /= alen;
    } else {
      ax = 1;
      ay = 0;
    }
    std::vector<double> s0(p0.size()), s1(p1.size());
    for (std::size_t t = 0; t < p0.size(); ++t) s0[t] = ax * p0[t].first + ay * p0[t].second;
    for (std::size_t t = 0; t < p1.size(); ++t) s1[t] = ax * p1[t].first + ay * p1[t].second;
    return std::tuple{assign_gaussian(s0, s1), wI, wQ};
  };

  for (double T : windows_ns) {
    auto [g, wI, wQ] = eval_window(T);
    out.fid0_vs_t.push_back(g.fid0);
    out.fid1_vs_t.push_back(g.fid1);
    out.snr_vs_t.push_back(g.snr);
    if (T == windows_ns.back()) {
      out.final_window = g;
      out.w_I.assign(wI.data(), wI.data() + wI.size());
      out.w_Q.assign(wQ.data(), wQ.data() + wQ.size());
    }
  }
  return out;
}

}  // namespace qrt
