#include "qrt/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "qrt/constants.hpp"

namespace qrt {

double CircuitParams::e_q_from_series() const {
  const double ns = double(n_S);
  return E_J * (ns * ns - 1.0) / (ns * ns * ns);
}

double CircuitParams::e_cab_resolved() const {
  return E_Cab >= 0.0 ? E_Cab : derive_e_cab(*this);
}

std::vector<std::string> CircuitParams::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  pos(E_Ja, "E_Ja");
  pos(E_Jb, "E_Jb");
  pos(E_J, "E_J");
  pos(E_Ca, "E_Ca");
  pos(E_Cb, "E_Cb");
  pos(C_a, "C_a");
  pos(C_b, "C_b");
  pos(C_J, "C_J");
  pos(kappa_r, "kappa_r");
  if (n_S < 1 || n_Ja < 1 || n_Jb < 1)
    throw std::invalid_argument("junction counts must be positive");
  std::vector<std::string> warnings;
  const double eq_expect = e_q_from_series();
  if (std::abs(E_Q - eq_expect) > 1e-3 * std::max(1.0, std::abs(eq_expect))) {
    warnings.push_back("E_Q = " + std::to_string(E_Q) + " GHz inconsistent with (nS^2-1)/nS^3 * E_J = " +
                       std::to_string(eq_expect) + " GHz");
  }
  return warnings;
}

Eigen::MatrixXcd exact_hamiltonian_matrix(const CircuitParams& p, const BasisChoice& basis,
                                          const FockSpace& s, const BranchPhaseOffsets& off) {
  if (!(basis.zpf_a > 0.0) || !(basis.zpf_b > 0.0))
    throw std::invalid_argument("zpf values must be positive");
  const double za = basis.zpf_a, zb = basis.zpf_b;
  const Eigen::MatrixXcd na = LadderPolynomial::charge(Mode::a, za).to_matrix_single(Mode::a, s.dim_a);
  const Eigen::MatrixXcd nb = LadderPolynomial::charge(Mode::b, zb).to_matrix_single(Mode::b, s.dim_b);
  const Eigen::MatrixXcd Ia = Eigen::MatrixXcd::Identity(s.dim_a, s.dim_a);
  const Eigen::MatrixXcd Ib = Eigen::MatrixXcd::Identity(s.dim_b, s.dim_b);

  Eigen::MatrixXcd H = 4.0 * p.E_Ca * kronecker(na * na, Ib) +
                       4.0 * p.E_Cb * kronecker(Ia, nb * nb) +
                       8.0 * p.e_cab_resolved() * kronecker(na, nb);

  // -n_Ja E_Ja cos((phi_a + off.res)/n_Ja)
  H -= double(p.n_Ja) * p.E_Ja *
       two_mode_cos(s, za, zb, 1.0 / p.n_Ja, 0.0, off.res / p.n_Ja);
  // -n_Jb E_Jb cos((phi_b + off.qubit)/n_Jb)
  H -= double(p.n_Jb) * p.E_Jb *
       two_mode_cos(s, za, zb, 0.0, 1.0 / p.n_Jb, off.qubit / p.n_Jb);
  // -n_S E_J cos((phi_a - phi_b + off.series)/n_S)
  H -= double(p.n_S) * p.E_J *
       two_mode_cos(s, za, zb, 1.0 / p.n_S, -1.0 / p.n_S, off.series / p.n_S);
  // -alpha E_J cos(phi_a - phi_b + off.lone + 2pi flux_bias); the half-flux
  // bias flips this to +alpha E_J cos(phi_a - phi_b + off.lone)
  H -= p.alpha * p.E_J *
       two_mode_cos(s, za, zb, 1.0, -1.0, off.lone + kTwoPi * p.flux_bias);

  return 0.5 * (H + H.adjoint().eval());
}

LadderPolynomial taylor_hamiltonian(const CircuitParams& p, const BasisChoice& basis, int order) {
  if (!(basis.zpf_a > 0.0) || !(basis.zpf_b > 0.0))
    throw std::invalid_argument("zpf values must be positive");
  const double za = basis.zpf_a, zb = basis.zpf_b;

  LadderPolynomial H;
  const LadderPolynomial na = LadderPolynomial::charge(Mode::a, za);
  const LadderPolynomial nb = LadderPolynomial::charge(Mode::b, zb);
  H += (na * na) * LadderPolynomial::Coef(4.0 * p.E_Ca, 0.0);
  H += (nb * nb) * LadderPolynomial::Coef(4.0 * p.E_Cb, 0.0);
  H += (na * nb) * LadderPolynomial::Coef(8.0 * p.e_cab_resolved(), 0.0);

  H += taylor_cosine_two_mode(p.E_Ja, p.n_Ja, za, 0.0, order);
  H += taylor_cosine_two_mode(p.E_Jb, p.n_Jb, 0.0, zb, order);
  H += taylor_cosine_two_mode(p.E_J, p.n_S, za, -zb, order);
  // +alpha E_J cos(phi_a - phi_b) at half flux == -(-alpha E_J) cos(...)
  const double lone_sign = -std::cos(kTwoPi * p.flux_bias);  // +1 at half flux
  H += taylor_cosine_two_mode(-lone_sign * p.alpha * p.E_J, 1, za, -zb, order);

  return H.without_constant();
}

HamiltonianBundle build_hamiltonian(const CircuitParams& p, const BasisChoice& basis,
                                    const FockSpace& s, PotentialForm form, int taylor_order) {
  HamiltonianBundle out;
  out.basis = basis;
  out.space = s;
  out.form = form;
  out.taylor_order = taylor_order;
  const LadderPolynomial H_taylor = taylor_hamiltonian(p, basis, taylor_order);
  auto parts = H_taylor.split();
  out.H_a = parts.pure_a;
  out.H_b = parts.pure_b;
  out.H_coup = parts.coupling;
  out.H_full = (form == PotentialForm::exact) ? exact_hamiltonian_matrix(p, basis, s)
                                              : H_taylor.to_matrix(s);
  return out;
}

CapacitanceMatrixResult capacitance_transform(double C_Jq, double C_Jr, double C_a,
                                              double C_b, double E_Ja, double E_J) {
  if (!(C_Jq > 0.0) || !(C_Jr > 0.0) || !(C_a > 0.0) || !(C_b > 0.0))
    throw std::invalid_argument("capacitances must be positive");
  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
  auto add = [&C](int i, int j, double c) {
    if (i >= 0) C(i, i) += c;
    if (j >= 0) C(j, j) += c;
    if (i >= 0 && j >= 0) {
      C(i, j) -= c;
      C(j, i) -= c;
    }
  };
  enum { A = 0, B = 1, R = 2, Q = 3 };
  add(A, -1, C_a);
  add(B, -1, C_b);
  add(A, R, C_Jr);
  add(R, -1, C_Jr);
  add(A, Q, C_Jq);
  add(Q, B, C_Jq);
  add(A, B, 0.5 * C_Jq);  // lone junction, half area

  Eigen::FullPivLU<Eigen::Matrix4d> lu(C);
  if (!lu.isInvertible()) throw std::invalid_argument("singular capacitance matrix");

  Eigen::Matrix4d W;
  W << 1, 0, 0, 0,
       0, 1, 0, 0,
       0.5, 0, -1, 0,
       0.5, 0.5, 0, -1;
  CapacitanceMatrixResult out;
  out.E_C = kChargingEnergyGHzfF * (W * lu.inverse() * W.transpose());
  if (E_Ja > 0.0) out.internal_freq_r = std::sqrt(8.0 * out.E_C(2, 2) * 2.0 * E_Ja);
  if (E_J > 0.0) out.internal_freq_q = std::sqrt(8.0 * out.E_C(3, 3) * 2.0 * E_J);
  return out;
}

double derive_e_cab(const CircuitParams& p) {
  // junction capacitance C_J applies to both quarton series JJs and (at half
  // area) the lone JJ; the resonator array junctions are assumed equal-size
  const auto r = capacitance_transform(p.C_J, p.C_J, p.C_a, p.C_b);
  return r.E_C(0, 1);
}

}  // namespace qrt
