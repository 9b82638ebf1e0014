#include "qrt/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace qrt {

Eigen::MatrixXcd annihilation(int dim) {
  if (dim < 2) throw std::invalid_argument("Fock dimension must be >= 2");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Eigen::MatrixXcd build_annihilation(const FockSpace& s, Mode m) {
  if (s.dim_a < 2 || s.dim_b < 2) throw std::invalid_argument("Fock dims must be >= 2");
  if (m == Mode::a)
    return kronecker(annihilation(s.dim_a), Eigen::MatrixXcd::Identity(s.dim_b, s.dim_b));
  return kronecker(Eigen::MatrixXcd::Identity(s.dim_a, s.dim_a), annihilation(s.dim_b));
}

bool is_hermitian(const Eigen::MatrixXcd& M, double rel_tol) {
  const double scale = std::max(1.0, M.norm());
  return (M - M.adjoint()).norm() <= rel_tol * scale;
}

Eigen::MatrixXcd matrix_exp_i(const Eigen::MatrixXcd& phi) {
  if (!is_hermitian(phi, 1e-10)) throw std::invalid_argument("matrix_exp_i: non-Hermitian input");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(phi);
  const auto& w = es.eigenvalues();
  Eigen::VectorXcd ph(w.size());
  for (int i = 0; i < w.size(); ++i) ph(i) = std::polar(1.0, w(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd matrix_cosine(const Eigen::MatrixXcd& phi) {
  const Eigen::MatrixXcd E = matrix_exp_i(phi);
  return 0.5 * (E + E.adjoint());
}

Eigen::MatrixXcd matrix_sine(const Eigen::MatrixXcd& phi) {
  const Eigen::MatrixXcd E = matrix_exp_i(phi);
  return (E - E.adjoint()) / std::complex<double>(0.0, 2.0);
}

Eigen::MatrixXcd two_mode_exp_i(const FockSpace& s, double zpf_a, double zpf_b,
                                double ca, double cb, double offset) {
  const Eigen::MatrixXcd xa = annihilation(s.dim_a);
  const Eigen::MatrixXcd xb = annihilation(s.dim_b);
  const Eigen::MatrixXcd Ea =
      ca == 0.0 ? Eigen::MatrixXcd::Identity(s.dim_a, s.dim_a).eval()
                : matrix_exp_i(ca * zpf_a * (xa + xa.adjoint()));
  const Eigen::MatrixXcd Eb =
      cb == 0.0 ? Eigen::MatrixXcd::Identity(s.dim_b, s.dim_b).eval()
                : matrix_exp_i(cb * zpf_b * (xb + xb.adjoint()));
  return std::polar(1.0, offset) * kronecker(Ea, Eb);
}

Eigen::MatrixXcd two_mode_cos(const FockSpace& s, double zpf_a, double zpf_b,
                              double ca, double cb, double offset) {
  const Eigen::MatrixXcd E = two_mode_exp_i(s, zpf_a, zpf_b, ca, cb, offset);
  return 0.5 * (E + E.adjoint());
}

Eigen::MatrixXcd two_mode_sin(const FockSpace& s, double zpf_a, double zpf_b,
                              double ca, double cb, double offset) {
  const Eigen::MatrixXcd E = two_mode_exp_i(s, zpf_a, zpf_b, ca, cb, offset);
  return (E - E.adjoint()) / std::complex<double>(0.0, 2.0);
}

}  // namespace qrt
