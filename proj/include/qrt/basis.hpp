#pragma once

#include "qrt/circuit.hpp"

namespace qrt {

enum class ZpfHeuristic { min_adag_a, min_adag_adag, max_overlap };

struct ZpfResult {
  double zpf = 0.0;
  double overlap = -1.0;  // sum_{k<=N} |<k|e_k>|^2 / (N+1)
};

// Scalar search for one mode's zpf with the other held fixed. N_levels is the
// number of bare levels scored in the overlap; must leave truncation margin.
// Throws std::runtime_error when no bracketing interval is found.
ZpfResult optimize_zpf(const CircuitParams& p, Mode mode, ZpfHeuristic h, int N_levels,
                       double other_zpf, double tilt, int taylor_order = 8,
                       int bare_dim = 25);

// Alternating per-mode optimization (the bare Hamiltonians share zpfs through
// the coupler terms); two rounds suffice for convergence at readout-type
// parameters.
BasisChoice optimize_basis(const CircuitParams& p, double tilt,
                           ZpfHeuristic h = ZpfHeuristic::min_adag_a, int N_levels = 10,
                           int rounds = 2, int taylor_order = 8, int bare_dim = 25);

// Linear-coupling objective |<0_a 1_b|H|1_a 0_b>| = |coeff of a bdag| of the
// normal-ordered Taylor Hamiltonian at the re-optimized basis.
double linear_coupling_element(const CircuitParams& p, double tilt,
                               const BasisChoice& basis, int taylor_order = 8);

struct TiltResult {
  double tilt = 1.0;           // t = 2 alpha
  double residual = 0.0;       // |<01|H|10>| at optimum
  double residual_untilted = 0.0;
  BasisChoice basis;           // basis optimized at the returned tilt
  bool boundary_warning = false;
};

TiltResult optimize_tilt(const CircuitParams& p, double lo = 0.8, double hi = 1.3,
                         ZpfHeuristic h = ZpfHeuristic::min_adag_a,
                         int taylor_order = 8);

}  // namespace qrt
