#include "qrt/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "qrt/numeric.hpp"

namespace qrt {

double golden_section_minimize(const std::function<double(double)>& f, double lo,
                               double hi, double rel_tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > rel_tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree) {
  const int n = int(x.size());
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      A(i, j) = p;
      p *= x[i];
    }
    b(i) = y[i];
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(c.data(), c.data() + c.size());
}

namespace {

// Bare-mode polynomial H_j at trial zpf (the other mode's zpf enters through
// the coupler expansion constants).
LadderPolynomial bare_mode(const CircuitParams& p, Mode mode, double zpf,
                           double other_zpf, double tilt, int order) {
  CircuitParams q = p;
  q.alpha = tilt / 2.0;
  BasisChoice b;
  b.zpf_a = (mode == Mode::a) ? zpf : other_zpf;
  b.zpf_b = (mode == Mode::b) ? zpf : other_zpf;
  auto parts = taylor_hamiltonian(q, b, order).split();
  return (mode == Mode::a) ? parts.pure_a : parts.pure_b;
}

double overlap_score(const LadderPolynomial& Hj, Mode mode, int N_levels, int bare_dim) {
  Eigen::MatrixXcd H = Hj.to_matrix_single(mode, bare_dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  double s = 0.0;
  for (int k = 0; k <= N_levels && k < bare_dim; ++k)
    s += std::norm(es.eigenvectors()(k, k));
  return s / double(N_levels + 1);
}

}  // namespace

ZpfResult optimize_zpf(const CircuitParams& p, Mode mode, ZpfHeuristic h, int N_levels,
                       double other_zpf, double tilt, int taylor_order, int bare_dim) {
  if (N_levels > bare_dim - taylor_order)
    throw std::invalid_argument("N_levels exceeds truncation margin");
  const double E_L = (mode == Mode::a) ? p.E_Ja_eff() : p.E_Jb / p.n_Jb;
  const double E_C = (mode == Mode::a) ? p.E_Ca : p.E_Cb;
  const double z_harm = std::pow(2.0 * E_C / E_L, 0.25);

  auto objective = [&](double z) -> double {
    LadderPolynomial Hj = bare_mode(p, mode, z, other_zpf, tilt, taylor_order);
    switch (h) {
      case ZpfHeuristic::min_adag_a: {
        const MonomialKey k = (mode == Mode::a) ? MonomialKey{1, 1, 0, 0} : MonomialKey{0, 0, 1, 1};
        return Hj.coeff(k).real();
      }
      case ZpfHeuristic::min_adag_adag: {
        const MonomialKey k = (mode == Mode::a) ? MonomialKey{2, 0, 0, 0} : MonomialKey{0, 0, 2, 0};
        return std::abs(Hj.coeff(k));
      }
      case ZpfHeuristic::max_overlap:
        return -overlap_score(Hj, mode, N_levels, bare_dim);
    }
    return 0.0;
  };

  // bracket the minimum by scanning around the harmonic guess
  double lo = 0.25 * z_harm, hi = 2.5 * z_harm;
  {
    const int n_scan = 24;
    int best = -1;
    double fbest = 0.0;
    std::vector<double> zs(n_scan), fs(n_scan);
    for (int i = 0; i < n_scan; ++i) {
      zs[i] = lo + (hi - lo) * i / double(n_scan - 1);
      fs[i] = objective(zs[i]);
      if (best < 0 || fs[i] < fbest) {
        best = i;
        fbest = fs[i];
      }
    }
    if (best == 0 || best == n_scan - 1)
      throw std::runtime_error("optimize_zpf: no interior bracket in [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    lo = zs[best - 1];
    hi = zs[best + 1];
  }
  ZpfResult r;
  r.zpf = golden_section_minimize(objective, lo, hi, 1e-5);
  r.overlap = overlap_score(bare_mode(p, mode, r.zpf, other_zpf, tilt, taylor_order),
                            mode, N_levels, bare_dim);
  return r;
}

BasisChoice optimize_basis(const CircuitParams& p, double tilt, ZpfHeuristic h,
                           int N_levels, int rounds, int taylor_order, int bare_dim) {
  BasisChoice b;
  b.zpf_a = std::pow(2.0 * p.E_Ca / p.E_Ja_eff(), 0.25);
  b.zpf_b = std::pow(2.0 * p.E_Cb / (p.E_Jb / p.n_Jb), 0.25);
  for (int r = 0; r < rounds; ++r) {
    auto ra = optimize_zpf(p, Mode::a, h, N_levels, b.zpf_b, tilt, taylor_order, bare_dim);
    b.zpf_a = ra.zpf;
    b.overlap_a = ra.overlap;
    auto rb = optimize_zpf(p, Mode::b, h, N_levels, b.zpf_a, tilt, taylor_order, bare_dim);
    b.zpf_b = rb.zpf;
    b.overlap_b = rb.overlap;
  }
  return b;
}

double linear_coupling_element(const CircuitParams& p, double tilt,
                               const BasisChoice& basis, int taylor_order) {
  CircuitParams q = p;
  q.alpha = tilt / 2.0;
  // <0_a 1_b| adag^p a^q bdag^r b^s |1_a 0_b> = delta_{p0} delta_{q1} delta_{r1} delta_{s0}
  return std::abs(taylor_hamiltonian(q, basis, taylor_order).coeff({0, 1, 1, 0}));
}

TiltResult optimize_tilt(const CircuitParams& p, double lo, double hi, ZpfHeuristic h,
                         int taylor_order) {
  auto objective = [&](double t) -> double {
    BasisChoice b = optimize_basis(p, t, h, 10, 2, taylor_order);
    return linear_coupling_element(p, t, b, taylor_order);
  };
  TiltResult out;
  out.tilt = golden_section_minimize(objective, lo, hi, 1e-6);
  out.basis = optimize_basis(p, out.tilt, h, 10, 2, taylor_order);
  out.residual = linear_coupling_element(p, out.tilt, out.basis, taylor_order);
  {
    BasisChoice b1 = optimize_basis(p, 1.0, h, 10, 2, taylor_order);
    out.residual_untilted = linear_coupling_element(p, 1.0, b1, taylor_order);
  }
  const double span = hi - lo;
  out.boundary_warning =
      (out.tilt - lo) < 0.01 * span || (hi - out.tilt) < 0.01 * span;
  return out;
}

}  // namespace qrt
