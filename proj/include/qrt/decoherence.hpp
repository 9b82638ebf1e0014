#pragma once

#include <cstdint>
#include <vector>

#include "qrt/config.hpp"
#include "qrt/dissipation.hpp"

namespace qrt {

// Thermal-photon shot-noise dephasing rate (1/s):
// gamma = nbar_t (nbar_t + 1) (2chi)^2 / kappa with nbar_t Bose-Einstein at
// (omega_ref, T). Inputs are /2pi values in GHz, T in mK.
double thermal_dephasing(double two_chi, double kappa_r, double T_mK, double omega_ref);

struct ResistorLossResult {
  double rate_total = 0.0;  // 1/s
  double rate_C = 0.0;      // charge-coupling term
  double rate_Q = 0.0;      // quarton sine term
};

// Normal-metal dissipation on the |00> -> target transition. The charge term
// uses the transformed mode capacitances and the combined operator
// C_J (C_b n_a + C_a n_b) / C_Sigma; prefactors carry cyclic frequencies.
ResistorLossResult resistor_loss(const LabeledSpectrum& spec, const CircuitParams& p,
                                 const BasisChoice& basis, double R_uOhm,
                                 Mode target = Mode::b);

// Quasiparticle tunneling summed over the four junction branches
// (qubit, quarton series, quarton lone, resonator), each entering once with
// its branch phase and Josephson energy. Rate in 1/s.
double quasiparticle_decay(const LabeledSpectrum& spec, const CircuitParams& p,
                           const BasisChoice& basis, const EnvironmentParams& env,
                           bool include_quarton = true);

// Dielectric loss of the qubit transition (1/s).
double dielectric_loss(const LabeledSpectrum& spec, const CircuitParams& p,
                       const BasisChoice& basis, const EnvironmentParams& env);

enum class FluxLoop { quarton, ground };

// Irrotational flux allocation coefficients for a loop, as branch offsets per
// unit loop phase phit = 2 pi Phi/Phi0.
BranchPhaseOffsets flux_offsets(const CircuitParams& p, FluxLoop loop, double phit);

struct FluxT1Result {
  double rate_total = 0.0;  // 1/s
  double rate_quarton = 0.0;
  double rate_ground = 0.0;
  double elem_quarton = 0.0;  // |<0|dH/dphit|1>|, GHz
  double elem_ground = 0.0;
};

FluxT1Result flux_t1(const LabeledSpectrum& spec, const CircuitParams& p,
                     const BasisChoice& basis, const EnvironmentParams& env);

// Qubit frequency vs loop phase from eigensolves, quadratic fit around bias.
struct FluxDispersion {
  double f0 = 0.0;         // GHz
  double slope = 0.0;      // GHz per rad of phit
  double curvature = 0.0;  // GHz per rad^2  (d^2 f / dphit^2)
};

FluxDispersion fit_flux_dispersion(const CircuitParams& p, const BasisChoice& basis,
                                   const FockSpace& s, FluxLoop loop, int n_points = 7,
                                   double span = 0.02);

struct EchoResult {
  double T2_s = 0.0;
  bool lower_bound = false;  // coherence did not decay inside the window
  std::vector<double> tau_s;
  std::vector<double> coherence;
};

// Spectral-synthesis echo simulation for one loop: 1/f^gamma series split into
// segments, midpoint sign flip, exponential fit to the averaged coherence.
EchoResult flux_echo_loop(const FluxDispersion& disp, double A_phi_uPhi0, double gamma_phi,
                          double segment_us, double total_s, double dt_us,
                          std::uint64_t seed);

struct EchoCombined {
  EchoResult quarton, ground;
  double T2_s = 0.0;
  bool lower_bound = false;
};

EchoCombined flux_t2_echo(const CircuitParams& p, const BasisChoice& basis,
                          const FockSpace& s, const EnvironmentParams& env);

// Purcell decay kappa(w_q) |<00|n0|01>|^2 in 1/s (no filter weight by default).
double purcell_decay(const LabeledSpectrum& spec, const KappaModel& kappa,
                     bool apply_filter = false);

// SNR ~ sqrt(eta kappa nbar |sin 2theta| t), |sin 2theta| = chi kappa/(chi^2 + kappa^2/4).
double snr_scaling(double chi, double kappa, double n_bar, double eta, double t);

struct DecoherenceBudget {
  ResistorLossResult resistor;
  double qp_rate = 0.0;
  double dielectric_rate = 0.0;
  FluxT1Result flux;
  double purcell_rate = 0.0;
  double thermal_rate = 0.0;
  EchoCombined echo;
  double t1_rate_total = 0.0;  // sum of relaxation channels, 1/s
  double t2_rate_total = 0.0;  // sum of pure-dephasing channels, 1/s
};

DecoherenceBudget compute_budget(const LabeledSpectrum& spec, const CircuitParams& p,
                                 const BasisChoice& basis, const EnvironmentParams& env,
                                 const KappaModel& kappa, double two_chi_GHz,
                                 bool run_echo = true);

}  // namespace qrt
