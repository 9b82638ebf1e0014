#include "qrt/qnd.hpp"

#include <cmath>

namespace qrt {

DecayMatrix build_decay_matrix(const LabeledSpectrum& spec, const KappaModel& kappa,
                               double amplitude_floor) {
  const Eigen::MatrixXcd a = build_annihilation(spec.space, Mode::a);
  // n0 = i(adag - a) in the eigenbasis
  const Eigen::MatrixXcd n0_fock =
      std::complex<double>(0.0, 1.0) * (a.adjoint() - a);
  const Eigen::MatrixXcd n0 = spec.states.adjoint() * n0_fock * spec.states;

  DecayMatrix D;
  D.dim = int(spec.energies.size());
  for (int j = 0; j < D.dim; ++j)
    for (int i = 0; i < j; ++i) {  // energies ascending: E_i < E_j
      const double w = spec.energies(j) - spec.energies(i);
      if (w <= 0.0) continue;
      const double amp = std::abs(n0(i, j)) * std::sqrt(kappa.rate_at(w));
      if (amp > amplitude_floor) D.entries.push_back({i, j, w, amp});
    }
  return D;
}

QndEstimate qbar_estimate(const DecayMatrix& D, const LabeledSpectrum& spec, int k,
                          double n_bar, double delta_t_ns) {
  QndEstimate out;
  out.n_bar = n_bar;
  out.delta_t = delta_t_ns;

  // Poisson weights |c_n|^2 = e^-nbar nbar^n / n!, truncated when the
  // remaining tail drops below 1e-6.
  std::vector<double> c;  // amplitudes (real, phase of alpha irrelevant)
  double tail = 1.0;
  double pn = std::exp(-n_bar);
  for (int n = 0; tail > 1e-6; ++n) {
    c.push_back(std::sqrt(pn));
    tail -= pn;
    pn *= n_bar / double(n + 1);
    if (n > 200) break;
  }
  out.coherent_cutoff = int(c.size());

  // ladder eigenindices for |n, k>; require the full truncated Poisson range
  std::vector<int> ladder(c.size(), -1);
  for (int n = 0; n < int(c.size()); ++n) {
    if (!spec.has(n, k)) {
      if (n_bar > 0.0)
        throw LabelingError("qbar: labeled resonator ladder too short for n_bar (need n=" +
                            std::to_string(n) + ", q=" + std::to_string(k) + ")");
      break;
    }
    ladder[n] = spec.index(n, k);
  }

  // label of each eigenindex (reverse map); unlabeled -> q = -1
  std::vector<int> q_of(D.dim, -1);
  for (const auto& [key, ei] : spec.label_map) q_of[ei] = key.second;

  // amplitudes on each decay target: sum_n c_n sqrt(kappa_eff, target<- (n,k))
  std::vector<double> amp(D.dim, 0.0);
  for (const auto& e : D.entries) {
    for (int n = 0; n < int(ladder.size()); ++n) {
      if (ladder[n] == e.j) amp[e.i] += c[n] * e.amplitude;
    }
  }
  double gamma = 0.0;
  for (int i = 0; i < D.dim; ++i)
    if (q_of[i] != k) gamma += amp[i] * amp[i];
  out.gamma = gamma;
  out.qbar = std::exp(-delta_t_ns * gamma);
  return out;
}

}  // namespace qrt
