#include "qrt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace qrt {

int LabeledSpectrum::index(int n_a, int n_b) const {
  auto it = label_map.find({n_a, n_b});
  if (it == label_map.end())
    throw LabelingError("no label for (" + std::to_string(n_a) + "," + std::to_string(n_b) + ")");
  return it->second;
}

double LabeledSpectrum::energy(int n_a, int n_b) const {
  const double ov = overlap.at({n_a, n_b});
  if (ov < 0.25)
    throw LabelingError("label (" + std::to_string(n_a) + "," + std::to_string(n_b) +
                        ") ambiguous: overlap " + std::to_string(ov) +
                        " < 0.25 (avoided crossing)");
  return energies(index(n_a, n_b)) - energies(index(0, 0));
}

std::complex<double> LabeledSpectrum::matrix_element(const Eigen::MatrixXcd& Op,
                                                     std::pair<int, int> k2,
                                                     std::pair<int, int> k1) const {
  return states.col(index(k2.first, k2.second)).dot(Op * states.col(index(k1.first, k1.second)));
}

LabeledSpectrum eigensolve_and_label(const Eigen::MatrixXcd& H, const FockSpace& s) {
  if (!is_hermitian(H, 1e-10)) throw std::invalid_argument("eigensolve: non-Hermitian H");
  LabeledSpectrum out;
  out.space = s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint().eval()));
  out.energies = es.eigenvalues();
  out.states = es.eigenvectors();

  const int N = s.size();
  // bare states ordered by total excitation, then n_a
  std::vector<std::pair<int, int>> bare;
  bare.reserve(N);
  for (int na = 0; na < s.dim_a; ++na)
    for (int nb = 0; nb < s.dim_b; ++nb) bare.push_back({na, nb});
  std::sort(bare.begin(), bare.end(), [](auto l, auto r) {
    return std::pair{l.first + l.second, l.first} < std::pair{r.first + r.second, r.first};
  });

  // overlap table |<row|eig>|^2
  Eigen::MatrixXd ov = out.states.cwiseAbs2();

  std::vector<int> owner(N, -1);    // eigenindex -> position in bare[] that claimed it
  std::vector<int> claimed(N, -1);  // bare position -> eigenindex
  std::function<void(int)> claim = [&](int pos) {
    const int row = s.index(bare[pos].first, bare[pos].second);
    // candidate eigenstates in decreasing overlap
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int l, int r) { return ov(row, l) > ov(row, r); });
    for (int ei : order) {
      if (owner[ei] < 0) {
        owner[ei] = pos;
        claimed[pos] = ei;
        return;
      }
      const int prev = owner[ei];
      const int prev_row = s.index(bare[prev].first, bare[prev].second);
      if (ov(row, ei) > ov(prev_row, ei)) {
        owner[ei] = pos;
        claimed[pos] = ei;
        claimed[prev] = -1;
        claim(prev);  // loser re-assigns to its next-best unclaimed state
        return;
      }
    }
  };
  for (int pos = 0; pos < N; ++pos) claim(pos);

  for (int pos = 0; pos < N; ++pos) {
    const auto [na, nb] = bare[pos];
    const int ei = claimed[pos];
    if (ei < 0) continue;
    const double o = ov(s.index(na, nb), ei);
    out.label_map[{na, nb}] = ei;
    out.overlap[{na, nb}] = o;
    if (o < 0.5) out.ambiguous.push_back({na, nb});
  }
  return out;
}

SpectrumMetrics compute_metrics(const LabeledSpectrum& spec, int n_star) {
  if (n_star < 2) throw std::invalid_argument("n_star must be >= 2");
  std::vector<std::pair<int, int>> missing;
  for (int q = 0; q <= 1; ++q)
    for (int i = 0; i <= n_star; ++i)
      if (!spec.has(i, q)) missing.push_back({i, q});
  for (auto k : {std::pair{0, 2}, std::pair{1, 1}})
    if (!spec.has(k.first, k.second)) missing.push_back(k);
  if (!missing.empty()) {
    std::string msg = "compute_metrics: missing labels:";
    for (auto [na, nb] : missing)
      msg += " (" + std::to_string(na) + "," + std::to_string(nb) + ")";
    throw LabelingError(msg);
  }

  SpectrumMetrics m;
  m.n_star = n_star;
  for (int q = 0; q <= 1; ++q) {
    double lo = 0.0, hi = 0.0;
    for (int i = 1; i <= n_star; ++i) {
      const double tr = spec.energy(i, q) - spec.energy(i - 1, q);
      if (i == 1) {
        lo = hi = tr;
      } else {
        lo = std::min(lo, tr);
        hi = std::max(hi, tr);
      }
    }
    (q == 0 ? m.spread_q0 : m.spread_q1) = hi - lo;
  }
  m.cross_kerr_2chi = spec.energy(1, 1) - spec.energy(0, 1) - spec.energy(1, 0);
  m.self_kerr_Kb = spec.energy(0, 2) - 2.0 * spec.energy(0, 1);
  for (auto k : spec.ambiguous)
    if (k.first <= n_star && k.second <= 2) m.ambiguity_flags.push_back(k);
  return m;
}

KerrEstimates analytic_kerr_estimates(const CircuitParams& p) {
  KerrEstimates k;
  const double EJa = p.E_Ja_eff();
  const double EJb = p.E_Jb / p.n_Jb;
  const double wa = std::sqrt(8.0 * p.E_Ca * EJa);
  const double wb = std::sqrt(8.0 * p.E_Cb * EJb);
  k.chi_ab = 2.0 * p.E_Q * std::sqrt(p.E_Ca * p.E_Cb / (EJa * EJb));
  k.self_a_internal = -p.E_Ca / double(p.n_Ja * p.n_Ja);
  k.self_b_internal = -p.E_Cb / double(p.n_Jb * p.n_Jb);
  k.self_a_quarton = p.E_Q / EJa * p.E_Ca;
  k.self_b_quarton = p.E_Q / EJb * p.E_Cb;
  const double chi2 = k.chi_ab * k.chi_ab;
  k.self_a_squeezing = -chi2 / (2.0 * wa);
  k.self_b_squeezing = -chi2 / (2.0 * wb);
  k.cross_squeezing_a = -chi2 / (2.0 * wb);
  k.cross_squeezing_b = -chi2 / (2.0 * wa);
  return k;
}

SqueezingToyResult squeezing_toy_check(double omega_a, double omega_b, double zeta, int dim) {
  if (!(std::abs(zeta) / omega_b < 0.05))
    throw std::invalid_argument("squeezing_toy_check requires zeta/omega_b < 0.05");
  const FockSpace s{dim, dim};
  const Eigen::MatrixXcd a = build_annihilation(s, Mode::a);
  const Eigen::MatrixXcd b = build_annihilation(s, Mode::b);
  const Eigen::MatrixXcd na = a.adjoint() * a;
  Eigen::MatrixXcd H = omega_a * na + omega_b * b.adjoint() * b +
                       zeta * (b.adjoint() * b.adjoint() + b * b) * na;
  LabeledSpectrum spec = eigensolve_and_label(0.5 * (H + H.adjoint().eval()), s);
  SqueezingToyResult r;
  r.cross_exact = spec.energy(1, 1) - spec.energy(0, 1) - spec.energy(1, 0);
  r.cross_analytic = -2.0 * zeta * zeta / omega_b;
  r.self_a_exact = (spec.energy(2, 0) - 2.0 * spec.energy(1, 0)) / 2.0;
  r.self_a_analytic = -zeta * zeta / omega_b;
  return r;
}

}  // namespace qrt
