#pragma once

#include <optional>
#include <vector>

#include "qrt/spectrum.hpp"

namespace qrt {

// Frequency-dependent environment coupling kappa(w) = kappa_r (w/w_r)^2 with an
// optional Lorentzian filter weight [1 + (2(w - w_c)/kappa_f)^2]^-1.
// kappa_r and frequencies are GHz (/2pi values); rate_at() returns the angular
// rate in 1/ns.
struct KappaModel {
  double kappa_r = 0.3;
  double omega_r = 16.1;
  struct Filter {
    double omega_center = 16.1;
    double kappa_f = 1.2;
  };
  std::optional<Filter> filter;

  double weight(double omega) const {
    if (!filter) return 1.0;
    const double x = 2.0 * (omega - filter->omega_center) / filter->kappa_f;
    return 1.0 / (1.0 + x * x);
  }
  double rate_at(double omega) const;  // angular 1/ns, includes filter weight
};

// A downward eigenstate transition j -> i (E_j > E_i) coupled through the
// resonator charge n0 = i(adag - a).
struct Transition {
  int i = 0;
  int j = 0;
  double omega = 0.0;  // GHz
  double rate = 0.0;   // kappa(w) f(w) |<e_i|n0|e_j>|^2, angular 1/ns
};

struct Bath {
  std::vector<Transition> members;
  double total_rate = 0.0;  // sum of member rates, angular 1/ns
  double omega_min = 0.0, omega_max = 0.0;
  // Jump operator with amplitudes folded in (kappa_k = 1 convention):
  // d = sum_members sqrt(rate) |i><j|.
  Eigen::MatrixXcd matrix(int dim) const;
};

struct DissipatorSet {
  std::vector<Bath> baths;
  int k_star = -1;              // monitored bath index, -1 when unset/empty
  double discard_threshold = 1e-5;  // GHz (rate/2pi); see prune()
  int pruned_count = 0;
  std::vector<Transition> pruned;
  bool empty() const { return baths.empty(); }
  double total_rate() const;
};

// kappa_eff for one eigenpair: kappa(w_ji) f(w_ji) |<e_i|n0|e_j>|^2 (1/ns).
// Throws std::invalid_argument for an upward transition (E_j <= E_i).
double effective_rate(int i, int j, const Eigen::VectorXd& energies,
                      const Eigen::MatrixXcd& n0, const KappaModel& kappa);

// All downward transitions within a basis of `energies.size()` states.
std::vector<Transition> enumerate_transitions(const Eigen::VectorXd& energies,
                                              const Eigen::MatrixXcd& n0,
                                              const KappaModel& kappa);

// 1-D clustering: sort by frequency and merge adjacent transitions with gap
// <= c * kappa (equivalent to density clustering in one dimension). The
// monitored index k_star is the bath containing `anchor` (pass {-1,-1} to
// select the highest-total-rate bath instead). Throws on an empty input.
DissipatorSet cluster_baths(std::vector<Transition> transitions, double c, double kappa,
                            std::pair<int, int> anchor = {-1, -1});

// Remove transitions with rate/2pi below threshold_GHz (default 10 kHz);
// dropped members are recorded and empty baths removed.
DissipatorSet prune(DissipatorSet set, double threshold_GHz = 1e-5);

}  // namespace qrt
