#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrt/fock.hpp"
#include "qrt/ladder.hpp"

namespace qrt {

// Circuit energies are linear frequencies in GHz (h = 1); capacitances in fF.
struct CircuitParams {
  double E_Ja = 538.0;   // resonator junction energy (per junction)
  double E_Jb = 20.3;    // qubit junction energy
  double E_J = 186.7;    // quarton series junction energy
  double E_Q = 70.0;     // quartic coupler energy, (nS^2-1)/nS^3 * E_J
  double E_Ca = 0.119;
  double E_Cb = 0.325;
  double E_Cab = -1.0;   // negative => derive from the capacitance transform
  double alpha = 0.51;   // tilt t = 2 alpha
  int n_S = 2;
  int n_Ja = 2;
  int n_Jb = 1;
  double C_a = 163.0;
  double C_b = 59.6;
  double C_J = 5.2;
  double C_s = -1.0;     // series-path capacitance; negative => C_J / n_S
  double C_alpha = -1.0; // lone-junction capacitance; negative => C_J / 2
  double kappa_r = 0.3;  // resonator linewidth / 2pi, GHz
  double kappa_f = 1.2;  // Purcell filter linewidth / 2pi, GHz
  double flux_bias = 0.5;  // quarton-loop flux in Phi0

  double tilt() const { return 2.0 * alpha; }
  double E_Ja_eff() const { return E_Ja / n_Ja; }
  double e_q_from_series() const;            // (nS^2-1)/nS^3 * E_J
  double c_s_resolved() const { return C_s > 0 ? C_s : C_J / n_S; }
  double c_alpha_resolved() const { return C_alpha > 0 ? C_alpha : 0.5 * C_J; }
  double e_cab_resolved() const;             // explicit value or transform-derived

  // Throws std::invalid_argument for non-positive energies/capacitances;
  // returns warnings (e.g. E_Q vs 3E_J/8 mismatch at n_S = 2).
  std::vector<std::string> validate() const;
};

struct BasisChoice {
  double zpf_a = 0.0;
  double zpf_b = 0.0;
  double overlap_a = -1.0;  // per-mode score sum_k |<k|e_k>|^2 / (N+1), in [0,1]
  double overlap_b = -1.0;
  double n_zpf_a() const { return 1.0 / (2.0 * zpf_a); }
  double n_zpf_b() const { return 1.0 / (2.0 * zpf_b); }
};

enum class PotentialForm { exact, taylor };

struct HamiltonianBundle {
  Eigen::MatrixXcd H_full;  // exact-cosine or Taylor matrix depending on form
  LadderPolynomial H_a, H_b, H_coup;  // normal-ordered Taylor decomposition
  BasisChoice basis;
  FockSpace space;
  PotentialForm form = PotentialForm::exact;
  int taylor_order = 8;
};

// Static flux offsets added inside each cosine argument (radians, before the
// 1/n junction division). Used for the irrotational flux-noise Hamiltonians.
struct BranchPhaseOffsets {
  double res = 0.0;     // resonator branch: cos((phi_a + res)/n_Ja)
  double qubit = 0.0;   // qubit branch:     cos((phi_b + qubit)/n_Jb)
  double lone = 0.0;    // lone junction:    cos(phi_a - phi_b + lone + 2pi flux_bias)
  double series = 0.0;  // series branch:    cos((phi_a - phi_b + series)/n_S)
};

// Full-cosine Hamiltonian matrix (GHz). Hermitian by construction.
Eigen::MatrixXcd exact_hamiltonian_matrix(const CircuitParams& p, const BasisChoice& basis,
                                          const FockSpace& s,
                                          const BranchPhaseOffsets& off = {});

// Normal-ordered Taylor Hamiltonian (constant dropped).
LadderPolynomial taylor_hamiltonian(const CircuitParams& p, const BasisChoice& basis,
                                    int order);

HamiltonianBundle build_hamiltonian(const CircuitParams& p, const BasisChoice& basis,
                                    const FockSpace& s, PotentialForm form,
                                    int taylor_order = 8);

struct CapacitanceMatrixResult {
  Eigen::Matrix4d E_C;          // GHz, ordering (a, b, r~, q~)
  double internal_freq_r = 0.0; // GHz
  double internal_freq_q = 0.0; // GHz
};

// Four-node transform: nodes (a, b, r, q) with branches
//   a-gnd C_a, b-gnd C_b, a-r C_Jr, r-gnd C_Jr, a-q C_Jq, q-b C_Jq,
//   a-b C_Jq/2 (lone junction, half-area)
// mapped by W = [[1,0,0,0],[0,1,0,0],[1/2,0,-1,0],[1/2,1/2,0,-1]];
// E_C = (e^2/2) W C^-1 W^T. Internal-mode frequencies are estimated as
// sqrt(8 E_C,ii * 2 E_J_branch). Throws for a singular capacitance matrix.
CapacitanceMatrixResult capacitance_transform(double C_Jq, double C_Jr, double C_a,
                                              double C_b, double E_Ja = 0.0,
                                              double E_J = 0.0);

// E_Cab = off-diagonal of the transform evaluated at the device capacitances.
double derive_e_cab(const CircuitParams& p);

}  // namespace qrt
