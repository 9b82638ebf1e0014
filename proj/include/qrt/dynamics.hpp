#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qrt/constants.hpp"
#include "qrt/dissipation.hpp"

namespace qrt {

struct ReadoutConfig {
  double omega_d = -1.0;      // GHz; negative selects the pulled-frequency midpoint
  double eps0 = -1.0;         // drive amplitude, rad/ns; negative requests calibration
  double pulse_len = 5.0;     // ns
  double ringdown = 5.0;      // ns
  double n_bar_target = 2.0;
  double eta = 1.0;           // heterodyne efficiency, (0, 1]
  int n_traj = 1000;          // per prepared state
  int substeps = 200;         // integration substeps per measurement step 1/(5 omega_d)
  std::uint64_t seed = 7;
  int threads = 0;            // 0 = hardware concurrency
  double me_dt = 1.2e-4;      // deterministic master-equation step, ns
};

// Eigenbasis restricted to labels (n_a < i_star, n_b < j_star).
struct TruncatedEigenbasis {
  std::vector<std::pair<int, int>> labels;
  Eigen::VectorXd energies;  // GHz, relative to the labeled ground state
  Eigen::MatrixXcd n0;       // i(adag - a) in this basis
  int i_star = 9, j_star = 5;
  int dim() const { return int(labels.size()); }
  int index_of(int n_a, int n_b) const;
};

TruncatedEigenbasis truncate_eigenbasis(const LabeledSpectrum& spec, int i_star, int j_star);

// Complete time-evolution model: truncated Hamiltonian, clustered dissipators
// and drive parameters.
struct ReadoutModel {
  TruncatedEigenbasis basis;
  DissipatorSet diss;
  KappaModel kappa;
  double omega_d = 0.0;    // GHz
  double eps0 = 0.0;       // rad/ns
  double pulse_len = 5.0;  // ns
  double ringdown = 5.0;   // ns

  // Sparse jump-operator views (entries of sqrt(rate) |i><j|).
  struct SparseOp {
    std::vector<int> rows, cols;
    std::vector<double> amps;
  };
  std::vector<SparseOp> jumps;
  Eigen::MatrixXcd sum_dd;  // sum_k d_k^dag d_k (dense, small)
  int monitored = -1;       // index into jumps (k*)

  int dim() const { return basis.dim(); }
  double drive_amplitude(double t) const {  // eps(t) = 2 eps0 cos(w_d t) gate
    return (t >= 0.0 && t <= pulse_len) ? 2.0 * eps0 * std::cos(kTwoPi * omega_d * t) : 0.0;
  }
};

ReadoutModel build_readout_model(const LabeledSpectrum& spec, const KappaModel& kappa,
                                 int i_star, int j_star, double cluster_c = 1.0,
                                 double prune_threshold_GHz = 1e-5);

// Square-pulse drive calibration to the target steady-state photon number
// (labeled n_a expectation averaged over both qubit preparations). Starts from
// eps0 = sqrt(n_bar (chi^2 + kappa^2/4)) and refines with short evolutions.
// Throws std::runtime_error after max_iter without landing within rel_tol.
double calibrate_drive(ReadoutModel& model, double n_bar_target, double rel_tol = 0.05,
                       int max_iter = 10, double me_dt = 2e-4);

struct LindbladResult {
  std::vector<double> times;            // ns
  std::vector<Eigen::VectorXd> populations;  // diagonal of rho at each sample
  std::vector<double> nbar;             // labeled photon number
  double qnd_fidelity = 0.0;            // sum_n P(n, k_init) at final time
  double max_trace_err = 0.0;
  double min_eigenvalue = 0.0;          // most negative rho eigenvalue seen at samples
  int init_qubit = 0;
};

// Deterministic Lindblad evolution (lab frame, RK4). total time defaults to
// pulse + ringdown. Throws std::runtime_error when |tr rho - 1| > 1e-6.
LindbladResult run_lindblad(const ReadoutModel& model, int init_qubit, double dt,
                            double t_total = -1.0, int sample_stride = 200);

struct TrajectoryEnsemble {
  int init_qubit = 0;
  int n_traj = 0;
  double bin_dt = 0.0;               // measurement bin, ns
  std::vector<double> bin_times;     // bin centers
  Eigen::MatrixXd I, Q;              // n_traj x n_bins demodulated records
  Eigen::MatrixXd mean_populations;  // n_bins x dim ensemble average
  double max_norm_drift = 0.0;
};

// Diffusive heterodyne unraveling (all channels unraveled, k* recorded),
// deterministic per-trajectory RNG streams keyed by (seed, trajectory).
// eta < 1 inflates the record noise by 1/sqrt(eta).
TrajectoryEnsemble run_trajectories(const ReadoutModel& model, int init_qubit,
                                    const ReadoutConfig& cfg);

// Two-sided Gaussian assignment on 1-D projected signals.
struct GaussianAssignment {
  double mu0 = 0, mu1 = 0, sigma0 = 0, sigma1 = 0;
  double threshold = 0;
  double fid0 = 0, fid1 = 0;   // per-state assignment fidelity
  double snr = 0;              // |mu1 - mu0| / ((sigma0 + sigma1)/2)
  bool low_separation = false;
};
GaussianAssignment assign_gaussian(const std::vector<double>& s0,
                                   const std::vector<double>& s1);

struct ReadoutStats {
  GaussianAssignment final_window;
  std::vector<double> window_ns;
  std::vector<double> fid0_vs_t, fid1_vs_t, snr_vs_t;
  // weight functions over bins of the final window (diagnostic output)
  std::vector<double> w_I, w_Q;
};

// Weighted integration of I/Q with W ~ |<I1> - <I0>|, projection through the
// blob means, Gaussian overlap fidelities and SNR, repeated over integration
// windows (default 1..pulse_len ns).
ReadoutStats readout_statistics(const TrajectoryEnsemble& e0, const TrajectoryEnsemble& e1,
                                std::vector<double> windows_ns = {});

}  // namespace qrt
