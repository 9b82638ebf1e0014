#pragma once

#include "qrt/dissipation.hpp"

namespace qrt {

// Decay-induced transition amplitudes sqrt(kappa_eff,ij) between full-space
// eigenstates, downward only (zero-temperature environment).
struct DecayMatrix {
  struct Entry {
    int i = 0;  // lower eigenstate (energy order)
    int j = 0;
    double omega = 0.0;      // GHz
    double amplitude = 0.0;  // sqrt(kappa_eff), 1/sqrt(ns)
  };
  std::vector<Entry> entries;
  int dim = 0;
};

// kappa_eff,ij = kappa(w_ij) f(w_ij) |<e_i|n0|e_j>|^2 with n0 = i(adag - a).
DecayMatrix build_decay_matrix(const LabeledSpectrum& spec, const KappaModel& kappa,
                               double amplitude_floor = 1e-12);

struct QndEstimate {
  double gamma = 0.0;   // leakage rate, 1/ns
  double qbar = 1.0;    // exp(-dt * gamma)
  double delta_t = 0.0; // ns
  double n_bar = 0.0;
  int coherent_cutoff = 0;  // Poisson tail truncation actually used
};

// First-order leakage out of the steady readout state |alpha, k>: coherent
// state with |alpha|^2 = n_bar built on the labeled resonator ladder at qubit
// state k; Gamma = sum over eigenstates whose label has q != k of
// |<target| D |alpha,k>|^2. Unlabeled targets count as leakage.
// Throws LabelingError when the labeled ladder cannot hold the Poisson tail
// (tail population above 1e-6).
QndEstimate qbar_estimate(const DecayMatrix& D, const LabeledSpectrum& spec, int k,
                          double n_bar, double delta_t_ns);

}  // namespace qrt
