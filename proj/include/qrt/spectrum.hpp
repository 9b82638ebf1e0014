#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "qrt/circuit.hpp"

namespace qrt {

struct LabelingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LabeledSpectrum {
  Eigen::VectorXd energies;   // ascending, GHz
  Eigen::MatrixXcd states;    // eigenvectors as columns, Fock ordering a (x) b
  std::map<std::pair<int, int>, int> label_map;      // (n_a, n_b) -> eigenindex
  std::map<std::pair<int, int>, double> overlap;     // |<n_a,n_b|lambda>|^2
  std::vector<std::pair<int, int>> ambiguous;        // overlap < 0.5
  FockSpace space;

  bool has(int n_a, int n_b) const { return label_map.count({n_a, n_b}) > 0; }
  int index(int n_a, int n_b) const;
  // Transition energy relative to the labeled ground state (GHz). Throws
  // LabelingError when the label is missing or its overlap is below 0.25.
  double energy(int n_a, int n_b) const;
  // <e(k2)| Op |e(k1)> for a full-space operator.
  std::complex<double> matrix_element(const Eigen::MatrixXcd& Op,
                                      std::pair<int, int> k2, std::pair<int, int> k1) const;
};

// Dense Hermitian eigensolve + greedy max-overlap labeling. Bare states are
// visited in increasing (n_a + n_b, n_a) order; a collision is resolved to the
// larger overlap with the loser re-assigned to its next-best unclaimed state.
LabeledSpectrum eigensolve_and_label(const Eigen::MatrixXcd& H, const FockSpace& s);

struct SpectrumMetrics {
  double spread_q0 = 0.0;      // S^{|0>}_{n*}, GHz
  double spread_q1 = 0.0;
  double cross_kerr_2chi = 0.0;  // w11 - w01 - w10, GHz
  double self_kerr_Kb = 0.0;     // w02 - 2 w01, GHz
  int n_star = 7;
  std::vector<std::pair<int, int>> ambiguity_flags;
};

// Throws LabelingError listing missing labels.
SpectrumMetrics compute_metrics(const LabeledSpectrum& spec, int n_star);

// Leading-order Kerr scalings for the generalized chain circuit (GHz).
struct KerrEstimates {
  double chi_ab = 0.0;             // 2 E_Q sqrt(E_Ca E_Cb / (E_Ja_eff E_Jb_eff))
  double self_a_internal = 0.0;    // -E_Ca / n_Ja^2
  double self_b_internal = 0.0;
  double self_a_quarton = 0.0;     // +(E_Q / E_Ja_eff) E_Ca
  double self_b_quarton = 0.0;
  double self_a_squeezing = 0.0;   // -chi_ab^2 / (2 w_a)
  double self_b_squeezing = 0.0;
  double cross_squeezing_a = 0.0;  // -chi_ab^2 / (2 w_b)
  double cross_squeezing_b = 0.0;  // -chi_ab^2 / (2 w_a)
  double cross_total() const { return chi_ab + cross_squeezing_a + cross_squeezing_b; }
  double self_a_total() const { return self_a_internal + self_a_quarton + self_a_squeezing; }
  double self_b_total() const { return self_b_internal + self_b_quarton + self_b_squeezing; }
};

KerrEstimates analytic_kerr_estimates(const CircuitParams& p);

// App-style toy model H = wa adag a + wb bdag b + zeta (bdag^2 + b^2) adag a:
// exact diagonalization vs the second-order results -2 zeta^2/wb (cross-Kerr)
// and -zeta^2/wb (mode-a self-Kerr as the adag^2 a^2 coefficient).
struct SqueezingToyResult {
  double cross_exact = 0.0, cross_analytic = 0.0;
  double self_a_exact = 0.0, self_a_analytic = 0.0;
};

SqueezingToyResult squeezing_toy_check(double omega_a, double omega_b, double zeta,
                                       int dim = 10);

}  // namespace qrt
