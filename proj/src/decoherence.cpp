#include "qrt/decoherence.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/FFT>

#include "qrt/constants.hpp"
#include "qrt/numeric.hpp"

namespace qrt {

double thermal_dephasing(double two_chi, double kappa_r, double T_mK, double omega_ref) {
  if (T_mK <= 0.0) return 0.0;
  const double x = kPlanck * omega_ref * 1e9 / (kBoltzmann * T_mK * 1e-3);
  const double nt = 1.0 / std::expm1(x);
  const double two_chi_rad = kTwoPi * two_chi * 1e9;
  const double kappa_rad = kTwoPi * kappa_r * 1e9;
  return nt * (nt + 1.0) * two_chi_rad * two_chi_rad / kappa_rad;
}

namespace {

Eigen::MatrixXcd charge_op(const LabeledSpectrum& spec, const BasisChoice& basis, Mode m) {
  const FockSpace& s = spec.space;
  if (m == Mode::a)
    return kronecker(
        LadderPolynomial::charge(Mode::a, basis.zpf_a).to_matrix_single(Mode::a, s.dim_a),
        Eigen::MatrixXcd::Identity(s.dim_b, s.dim_b));
  return kronecker(Eigen::MatrixXcd::Identity(s.dim_a, s.dim_a),
                   LadderPolynomial::charge(Mode::b, basis.zpf_b).to_matrix_single(Mode::b, s.dim_b));
}

}  // namespace

ResistorLossResult resistor_loss(const LabeledSpectrum& spec, const CircuitParams& p,
                                 const BasisChoice& basis, double R_uOhm, Mode target) {
  const FockSpace& s = spec.space;
  const std::pair<int, int> tgt = (target == Mode::b) ? std::pair{0, 1} : std::pair{1, 0};
  const double f_t = spec.energy(tgt.first, tgt.second) * 1e9;  // Hz, cyclic

  // transformed (loaded) mode capacitances
  const auto ec = capacitance_transform(p.C_J, p.C_J, p.C_a, p.C_b);
  const double Ca_eff = kChargingEnergyGHzfF / ec.E_C(0, 0);
  const double Cb_eff = kChargingEnergyGHzfF / ec.E_C(1, 1);
  const double Csig = Ca_eff * Cb_eff + p.C_J * (Ca_eff + Cb_eff);

  const Eigen::MatrixXcd op_c =
      (p.C_J * Cb_eff / Csig) * charge_op(spec, basis, Mode::a) +
      (p.C_J * Ca_eff / Csig) * charge_op(spec, basis, Mode::b);
  const Eigen::MatrixXcd op_q =
      p.alpha * two_mode_sin(s, basis.zpf_a, basis.zpf_b, 1.0, -1.0) -
      two_mode_sin(s, basis.zpf_a, basis.zpf_b, 1.0 / p.n_S, -1.0 / p.n_S);

  const double me_c = std::abs(spec.matrix_element(op_c, tgt, {0, 0}));
  const double me_q = std::abs(spec.matrix_element(op_q, tgt, {0, 0}));

  const double R = R_uOhm * 1e-6;
  const double pref = 8.0 * kElementaryCharge * kElementaryCharge * R / kHbar;
  ResistorLossResult out;
  out.rate_C = pref * f_t * me_c * me_c;
  out.rate_Q = pref * (p.E_J * 1e9) * (p.E_J * 1e9) / f_t * me_q * me_q;
  out.rate_total = out.rate_C + out.rate_Q;
  return out;
}

double quasiparticle_decay(const LabeledSpectrum& spec, const CircuitParams& p,
                           const BasisChoice& basis, const EnvironmentParams& env,
                           bool include_quarton) {
  const FockSpace& s = spec.space;
  const double w_q = spec.energy(0, 1);
  const double za = basis.zpf_a, zb = basis.zpf_b;
  struct Branch {
    double E_J;
    Eigen::MatrixXcd sin_half;  // sin(phi_branch / 2)
  };
  std::vector<Branch> branches;
  branches.push_back({p.E_Jb, two_mode_sin(s, za, zb, 0.0, 0.5 / p.n_Jb)});
  if (include_quarton) {
    branches.push_back({p.E_J, two_mode_sin(s, za, zb, 0.5 / p.n_S, -0.5 / p.n_S)});
    branches.push_back({p.alpha * p.E_J, two_mode_sin(s, za, zb, 0.5, -0.5)});
  }
  branches.push_back({p.E_Ja, two_mode_sin(s, za, zb, 0.5 / p.n_Ja, 0.0)});

  double rate = 0.0;
  for (const auto& br : branches) {
    const double me2 = std::norm(spec.matrix_element(br.sin_half, {0, 1}, {0, 0}));
    rate += me2 * 8.0 * (kTwoPi * br.E_J * 1e9) / M_PI * env.x_qp *
            std::sqrt(2.0 * env.gap / w_q);
  }
  return rate;
}

double dielectric_loss(const LabeledSpectrum& spec, const CircuitParams& p,
                       const BasisChoice& basis, const EnvironmentParams& env) {
  const FockSpace& s = spec.space;
  const Eigen::MatrixXcd phi_b =
      kronecker(Eigen::MatrixXcd::Identity(s.dim_a, s.dim_a),
                LadderPolynomial::phi(Mode::b, basis.zpf_b).to_matrix_single(Mode::b, s.dim_b));
  const double me2 = std::norm(spec.matrix_element(phi_b, {0, 1}, {0, 0}));
  const double w_q = kTwoPi * spec.energy(0, 1) * 1e9;  // rad/s
  const double Ec_J = kPlanck * p.E_Cb * 1e9;           // Joules
  const double coth = 1.0 / std::tanh(kHbar * w_q / (2.0 * kBoltzmann * env.temperature * 1e-3));
  return kHbar * w_q * w_q / (4.0 * Ec_J * env.Q_diel) * me2 * (coth + 1.0);
}

BranchPhaseOffsets flux_offsets(const CircuitParams& p, FluxLoop loop, double phit) {
  BranchPhaseOffsets off;
  const double Cs = p.c_s_resolved();
  const double Cal = p.c_alpha_resolved();
  if (loop == FluxLoop::quarton) {
    const double den = 2.0 * p.C_a * p.C_b + (p.C_a + p.C_b) * (Cal + Cs);
    const double A = p.C_b * Cs / den;
    const double B = p.C_a * Cs / den;
    off.res = A * phit;
    off.qubit = B * phit;
    off.lone = -(B - A) * phit;
    off.series = -(B - A + 1.0) * phit;
  } else {
    const double CQ = Cs + Cal;
    const double inv_a = 1.0 / p.C_a, inv_b = 1.0 / p.C_b, inv_q = 1.0 / CQ;
    const double tot = inv_a + inv_b + inv_q;
    off.res = -(inv_a / tot) * phit;
    off.qubit = (inv_b / tot) * phit;
    off.lone = (inv_q / tot) * phit;
    off.series = (inv_q / tot) * phit;
  }
  return off;
}

namespace {

double flux_matrix_element(const LabeledSpectrum& spec, const CircuitParams& p,
                           const BasisChoice& basis, FluxLoop loop) {
  const double d = 1e-6;
  const Eigen::MatrixXcd Hp =
      exact_hamiltonian_matrix(p, basis, spec.space, flux_offsets(p, loop, d));
  const Eigen::MatrixXcd Hm =
      exact_hamiltonian_matrix(p, basis, spec.space, flux_offsets(p, loop, -d));
  const Eigen::MatrixXcd dH = (Hp - Hm) / (2.0 * d);
  return std::abs(spec.matrix_element(dH, {0, 1}, {0, 0}));  // GHz per rad
}

double s_phi(double A_uPhi0, double gamma_phi, double f_Hz) {
  // S_Phi(w) = A^2 (2pi 1Hz / w)^gamma, A in Phi0/sqrt(Hz); returns Phi0^2 s
  return A_uPhi0 * 1e-6 * A_uPhi0 * 1e-6 * std::pow(1.0 / f_Hz, gamma_phi);
}

}  // namespace

FluxT1Result flux_t1(const LabeledSpectrum& spec, const CircuitParams& p,
                     const BasisChoice& basis, const EnvironmentParams& env) {
  FluxT1Result out;
  const double f_q = spec.energy(0, 1) * 1e9;  // Hz
  out.elem_quarton = flux_matrix_element(spec, p, basis, FluxLoop::quarton);
  out.elem_ground = flux_matrix_element(spec, p, basis, FluxLoop::ground);
  // dH/d(Phi/Phi0) in rad/s: 2pi (phit per flux quantum) * 2pi * elem_GHz * 1e9
  const double conv = kTwoPi * kTwoPi * 1e9;
  out.rate_quarton = std::pow(conv * out.elem_quarton, 2) *
                     s_phi(env.A_phi_quarton, env.gamma_phi, f_q);
  out.rate_ground = std::pow(conv * out.elem_ground, 2) *
                    s_phi(env.A_phi_ground, env.gamma_phi, f_q);
  out.rate_total = out.rate_quarton + out.rate_ground;
  return out;
}

FluxDispersion fit_flux_dispersion(const CircuitParams& p, const BasisChoice& basis,
                                   const FockSpace& s, FluxLoop loop, int n_points,
                                   double span) {
  std::vector<double> xs, ys;
  for (int i = 0; i < n_points; ++i) {
    const double phit = -span + 2.0 * span * i / double(n_points - 1);
    const Eigen::MatrixXcd H =
        exact_hamiltonian_matrix(p, basis, s, flux_offsets(p, loop, phit));
    LabeledSpectrum spec = eigensolve_and_label(H, s);
    xs.push_back(phit);
    ys.push_back(spec.energy(0, 1));
  }
  const auto c = polyfit(xs, ys, 2);
  FluxDispersion d;
  d.f0 = c[0];
  d.slope = c[1];
  d.curvature = 2.0 * c[2];
  return d;
}

EchoResult flux_echo_loop(const FluxDispersion& disp, double A_phi_uPhi0, double gamma_phi,
                          double segment_us, double total_s, double dt_us,
                          std::uint64_t seed) {
  EchoResult out;
  const double dt = dt_us * 1e-6;  // s
  const std::size_t n_seg = std::size_t(std::llround(segment_us / dt_us));
  std::size_t n = std::size_t(total_s / dt);
  n -= n % n_seg;
  const std::size_t n_segs = n / n_seg;

  // synthesize Phi(t)/Phi0 with one-sided S(f) = A^2 (1Hz/f)^gamma
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n_freq = n / 2 + 1;
  std::vector<std::complex<double>> X(n_freq);
  X[0] = 0.0;
  for (std::size_t k = 1; k < n_freq; ++k) {
    const double f = double(k) / (double(n) * dt);
    const double S = A_phi_uPhi0 * 1e-6 * A_phi_uPhi0 * 1e-6 * std::pow(1.0 / f, gamma_phi);
    const double amp = std::sqrt(S * double(n) / (4.0 * dt));
    X[k] = std::complex<double>(amp * gauss(rng), amp * gauss(rng));
  }
  if (n % 2 == 0) X[n_freq - 1] = std::complex<double>(X[n_freq - 1].real() * std::sqrt(2.0), 0.0);
  std::vector<double> x(n);
  {
    Eigen::FFT<double> fft;
    fft.inv(x, X, int(n));
  }

  // detuning in rad/s from the quadratic dispersion, phit = 2 pi Phi/Phi0
  std::vector<double> dw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phit = kTwoPi * x[i];
    dw[i] = kTwoPi * 1e9 * (disp.slope * phit + 0.5 * disp.curvature * phit * phit);
  }
  // remove the global mean; a static offset is not dephasing
  double mean = 0.0;
  for (double v : dw) mean += v;
  mean /= double(n);
  for (double& v : dw) v -= mean;

  // echo coherence on a tau grid
  const int n_tau = 40;
  std::vector<std::size_t> ms;
  for (int i = 1; i <= n_tau; ++i) {
    std::size_t m = std::size_t(double(n_seg) * i / n_tau);
    m -= m % 2;
    if (m >= 2 && (ms.empty() || m != ms.back())) ms.push_back(m);
  }
  std::vector<double> cum(n_seg);
  std::vector<std::complex<double>> acc(ms.size(), 0.0);
  for (std::size_t seg = 0; seg < n_segs; ++seg) {
    const double* base = dw.data() + seg * n_seg;
    double c = 0.0;
    for (std::size_t i = 0; i < n_seg; ++i) {
      c += base[i] * dt;
      cum[i] = c;
    }
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::size_t m = ms[k];
      const double phi = 2.0 * cum[m / 2 - 1] - cum[m - 1];
      acc[k] += std::polar(1.0, phi);
    }
  }
  out.tau_s.resize(ms.size());
  out.coherence.resize(ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) {
    out.tau_s[k] = double(ms[k]) * dt;
    out.coherence[k] = std::abs(acc[k]) / double(n_segs);
  }

  // exponential fit on the decaying region
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (out.coherence[k] > 0.2 && out.coherence[k] < 0.95) {
      xs.push_back(out.tau_s[k]);
      ys.push_back(std::log(out.coherence[k]));
    }
  }
  if (xs.size() >= 3) {
    const auto c = polyfit(xs, ys, 1);
    if (c[1] < 0.0) {
      out.T2_s = -1.0 / c[1];
      return out;
    }
  }
  // insufficient decay: report a lower bound from the last point
  const double c_end = out.coherence.back();
  out.lower_bound = true;
  out.T2_s = (c_end < 1.0 && c_end > 0.0) ? -out.tau_s.back() / std::log(c_end) : 1e12;
  return out;
}

EchoCombined flux_t2_echo(const CircuitParams& p, const BasisChoice& basis,
                          const FockSpace& s, const EnvironmentParams& env) {
  EchoCombined out;
  const FluxDispersion dq = fit_flux_dispersion(p, basis, s, FluxLoop::quarton);
  const FluxDispersion dg = fit_flux_dispersion(p, basis, s, FluxLoop::ground);
  out.quarton = flux_echo_loop(dq, env.A_phi_quarton, env.gamma_phi, env.echo_segment,
                               env.echo_total, env.echo_dt, env.echo_seed);
  out.ground = flux_echo_loop(dg, env.A_phi_ground, env.gamma_phi, env.echo_segment,
                              env.echo_total, env.echo_dt, env.echo_seed + 1);
  const double rate = 1.0 / out.quarton.T2_s + 1.0 / out.ground.T2_s;
  out.T2_s = 1.0 / rate;
  out.lower_bound = out.quarton.lower_bound && out.ground.lower_bound;
  return out;
}

double purcell_decay(const LabeledSpectrum& spec, const KappaModel& kappa, bool apply_filter) {
  const Eigen::MatrixXcd a = build_annihilation(spec.space, Mode::a);
  const Eigen::MatrixXcd n0 = std::complex<double>(0.0, 1.0) * (a.adjoint() - a);
  const double w_q = spec.energy(0, 1);
  KappaModel k = kappa;
  if (!apply_filter) k.filter.reset();
  const double me2 = std::norm(spec.matrix_element(n0, {0, 0}, {0, 1}));
  return k.rate_at(w_q) * me2 * 1e9;  // 1/ns -> 1/s
}

double snr_scaling(double chi, double kappa, double n_bar, double eta, double t) {
  const double sin2theta = chi * kappa / (chi * chi + kappa * kappa / 4.0);
  return std::sqrt(eta * kappa * n_bar * std::abs(sin2theta) * t);
}

DecoherenceBudget compute_budget(const LabeledSpectrum& spec, const CircuitParams& p,
                                 const BasisChoice& basis, const EnvironmentParams& env,
                                 const KappaModel& kappa, double two_chi_GHz,
                                 bool run_echo) {
  DecoherenceBudget b;
  b.resistor = resistor_loss(spec, p, basis, env.resistance, Mode::b);
  b.qp_rate = quasiparticle_decay(spec, p, basis, env);
  b.dielectric_rate = dielectric_loss(spec, p, basis, env);
  b.flux = flux_t1(spec, p, basis, env);
  b.purcell_rate = purcell_decay(spec, kappa);
  b.thermal_rate = thermal_dephasing(two_chi_GHz, kappa.kappa_r, env.temperature,
                                     env.thermal_ref);
  if (run_echo) b.echo = flux_t2_echo(p, basis, spec.space, env);
  b.t1_rate_total = b.resistor.rate_total + b.qp_rate + b.dielectric_rate +
                    b.flux.rate_total + b.purcell_rate;
  b.t2_rate_total = b.thermal_rate + (run_echo ? 1.0 / b.echo.T2_s : 0.0);
  return b;
}

}  // namespace qrt
