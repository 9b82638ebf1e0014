#pragma once

#include <Eigen/Dense>

#include "qrt/ladder.hpp"

namespace qrt {

// Single-mode annihilation operator, <n-1|a|n> = sqrt(n).
Eigen::MatrixXcd annihilation(int dim);

// Annihilation on the designated mode of the tensor space, identity on the other.
Eigen::MatrixXcd build_annihilation(const FockSpace& s, Mode m);

// kron(A, B) with the library's a (x) b ordering.
Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

bool is_hermitian(const Eigen::MatrixXcd& M, double rel_tol = 1e-10);

// exp(i phi) for Hermitian phi via spectral decomposition.
Eigen::MatrixXcd matrix_exp_i(const Eigen::MatrixXcd& phi);

// cos(phi) via spectral decomposition; throws for non-Hermitian input.
Eigen::MatrixXcd matrix_cosine(const Eigen::MatrixXcd& phi);
Eigen::MatrixXcd matrix_sine(const Eigen::MatrixXcd& phi);

// exp(i (ca phi_a + cb phi_b + offset)) on the tensor space, where
// phi_j = zpf_j (x_j + xdag_j). Mode operators commute, so the exponential
// factorizes into a Kronecker product of single-mode exponentials.
Eigen::MatrixXcd two_mode_exp_i(const FockSpace& s, double zpf_a, double zpf_b,
                                double ca, double cb, double offset = 0.0);

// cos/sin of (ca phi_a + cb phi_b + offset).
Eigen::MatrixXcd two_mode_cos(const FockSpace& s, double zpf_a, double zpf_b,
                              double ca, double cb, double offset = 0.0);
Eigen::MatrixXcd two_mode_sin(const FockSpace& s, double zpf_a, double zpf_b,
                              double ca, double cb, double offset = 0.0);

}  // namespace qrt
