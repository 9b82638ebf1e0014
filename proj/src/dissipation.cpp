#include "qrt/dissipation.hpp"

#include <algorithm>
#include <cmath>

#include "qrt/constants.hpp"

namespace qrt {

double KappaModel::rate_at(double omega) const {
  const double ratio = omega / omega_r;
  return kTwoPi * kappa_r * ratio * ratio * weight(omega);
}

Eigen::MatrixXcd Bath::matrix(int dim) const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : members) d(t.i, t.j) += std::sqrt(t.rate);
  return d;
}

double DissipatorSet::total_rate() const {
  double s = 0.0;
  for (const auto& b : baths) s += b.total_rate;
  return s;
}

double effective_rate(int i, int j, const Eigen::VectorXd& energies,
                      const Eigen::MatrixXcd& n0, const KappaModel& kappa) {
  if (!(energies(j) > energies(i)))
    throw std::invalid_argument("effective_rate: upward transition requested");
  const double w = energies(j) - energies(i);
  return kappa.rate_at(w) * std::norm(n0(i, j));
}

std::vector<Transition> enumerate_transitions(const Eigen::VectorXd& energies,
                                              const Eigen::MatrixXcd& n0,
                                              const KappaModel& kappa) {
  std::vector<Transition> out;
  const int n = int(energies.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (energies(j) <= energies(i)) continue;
      Transition t;
      t.i = i;
      t.j = j;
      t.omega = energies(j) - energies(i);
      t.rate = kappa.rate_at(t.omega) * std::norm(n0(i, j));
      if (t.rate > 0.0) out.push_back(t);
    }
  return out;
}

DissipatorSet cluster_baths(std::vector<Transition> transitions, double c, double kappa,
                            std::pair<int, int> anchor) {
  if (transitions.empty())
    throw std::invalid_argument("cluster_baths: empty transition list");
  if (!(c > 0.0)) throw std::invalid_argument("cluster_baths: c must be positive");
  std::sort(transitions.begin(), transitions.end(),
            [](const Transition& l, const Transition& r) { return l.omega < r.omega; });
  DissipatorSet out;
  Bath cur;
  auto flush = [&] {
    if (cur.members.empty()) return;
    cur.omega_min = cur.members.front().omega;
    cur.omega_max = cur.members.back().omega;
    cur.total_rate = 0.0;
    for (const auto& t : cur.members) cur.total_rate += t.rate;
    out.baths.push_back(std::move(cur));
    cur = Bath{};
  };
  for (const auto& t : transitions) {
    if (!cur.members.empty() && t.omega - cur.members.back().omega > c * kappa) flush();
    cur.members.push_back(t);
  }
  flush();

  out.k_star = -1;
  if (anchor.first >= 0) {
    for (int k = 0; k < int(out.baths.size()); ++k)
      for (const auto& t : out.baths[k].members)
        if (t.i == anchor.first && t.j == anchor.second) out.k_star = k;
  }
  if (out.k_star < 0) {
    double best = -1.0;
    for (int k = 0; k < int(out.baths.size()); ++k)
      if (out.baths[k].total_rate > best) {
        best = out.baths[k].total_rate;
        out.k_star = k;
      }
  }
  return out;
}

DissipatorSet prune(DissipatorSet set, double threshold_GHz) {
  DissipatorSet out;
  out.discard_threshold = threshold_GHz;
  const double min_rate = kTwoPi * threshold_GHz;  // angular 1/ns
  std::pair<int, int> anchor{-1, -1};
  if (set.k_star >= 0 && !set.baths[set.k_star].members.empty()) {
    // keep the monitored bath identity stable across pruning
    const auto& m = set.baths[set.k_star].members;
    auto best = std::max_element(m.begin(), m.end(), [](auto& l, auto& r) {
      return l.rate < r.rate;
    });
    anchor = {best->i, best->j};
  }
  for (auto& b : set.baths) {
    Bath nb;
    for (auto& t : b.members) {
      if (t.rate >= min_rate)
        nb.members.push_back(t);
      else {
        out.pruned.push_back(t);
        ++out.pruned_count;
      }
    }
    if (nb.members.empty()) continue;
    nb.omega_min = nb.members.front().omega;
    nb.omega_max = nb.members.back().omega;
    nb.total_rate = 0.0;
    for (const auto& t : nb.members) nb.total_rate += t.rate;
    out.baths.push_back(std::move(nb));
  }
  out.k_star = -1;
  for (int k = 0; k < int(out.baths.size()); ++k)
    for (const auto& t : out.baths[k].members)
      if (t.i == anchor.first && t.j == anchor.second) out.k_star = k;
  if (out.k_star < 0 && !out.baths.empty()) {
    double best = -1.0;
    for (int k = 0; k < int(out.baths.size()); ++k)
      if (out.baths[k].total_rate > best) {
        best = out.baths[k].total_rate;
        out.k_star = k;
      }
  }
  return out;
}

}  // namespace qrt
