#include "qrt/ladder.hpp"

#include <cmath>

namespace qrt {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

LadderPolynomial LadderPolynomial::monomial(const MonomialKey& k, Coef c) {
  LadderPolynomial p;
  p.add_term(k, c);
  return p;
}

LadderPolynomial LadderPolynomial::phi(Mode m, double zpf) {
  LadderPolynomial p;
  if (m == Mode::a) {
    p.add_term({1, 0, 0, 0}, zpf);
    p.add_term({0, 1, 0, 0}, zpf);
  } else {
    p.add_term({0, 0, 1, 0}, zpf);
    p.add_term({0, 0, 0, 1}, zpf);
  }
  return p;
}

LadderPolynomial LadderPolynomial::charge(Mode m, double zpf) {
  const double n_zpf = 1.0 / (2.0 * zpf);
  LadderPolynomial p;
  const Coef i_nz(0.0, n_zpf);
  if (m == Mode::a) {
    p.add_term({1, 0, 0, 0}, i_nz);
    p.add_term({0, 1, 0, 0}, -i_nz);
  } else {
    p.add_term({0, 0, 1, 0}, i_nz);
    p.add_term({0, 0, 0, 1}, -i_nz);
  }
  return p;
}

LadderPolynomial::Coef LadderPolynomial::coeff(const MonomialKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Coef{0.0, 0.0} : it->second;
}

int LadderPolynomial::max_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.degree());
  return d;
}

double LadderPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void LadderPolynomial::add_term(const MonomialKey& k, Coef c) {
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Coef{0.0, 0.0}) terms_.erase(it);
  } else if (c == Coef{0.0, 0.0}) {
    terms_.erase(it);
  }
}

void LadderPolynomial::check_overflow() const {
  for (const auto& [k, c] : terms_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::overflow_error(
          "ladder polynomial coefficient overflow (Taylor order too high for zpf scale)");
    }
  }
}

LadderPolynomial& LadderPolynomial::operator+=(const LadderPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

LadderPolynomial& LadderPolynomial::operator-=(const LadderPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

LadderPolynomial& LadderPolynomial::operator*=(Coef c) {
  if (c == Coef{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

LadderPolynomial operator*(const LadderPolynomial& l, const LadderPolynomial& r) {
  // Per mode: x^q xdag^p = sum_k k! C(q,k) C(p,k) xdag^(p-k) x^(q-k).
  LadderPolynomial out;
  for (const auto& [k1, c1] : l.terms()) {
    for (const auto& [k2, c2] : r.terms()) {
      const int ka_max = std::min(k1.p_a, k2.p_adag);
      const int kb_max = std::min(k1.q_b, k2.q_bdag);
      for (int ka = 0; ka <= ka_max; ++ka) {
        const double wa = factorial(ka) * binom(k1.p_a, ka) * binom(k2.p_adag, ka);
        for (int kb = 0; kb <= kb_max; ++kb) {
          const double wb = factorial(kb) * binom(k1.q_b, kb) * binom(k2.q_bdag, kb);
          MonomialKey k{k1.p_adag + k2.p_adag - ka, k1.p_a + k2.p_a - ka,
                        k1.q_bdag + k2.q_bdag - kb, k1.q_b + k2.q_b - kb};
          out.add_term(k, c1 * c2 * wa * wb);
        }
      }
    }
  }
  out.check_overflow();
  return out;
}

LadderPolynomial LadderPolynomial::adjoint() const {
  LadderPolynomial out;
  for (const auto& [k, c] : terms_) out.add_term(k.adjoint(), std::conj(c));
  return out;
}

bool LadderPolynomial::is_hermitian(double tol) const {
  for (const auto& [k, c] : terms_) {
    if (std::abs(coeff(k.adjoint()) - std::conj(c)) > tol * std::max(1.0, std::abs(c)))
      return false;
  }
  return true;
}

LadderPolynomial LadderPolynomial::without_constant() const {
  LadderPolynomial out = *this;
  out.terms_.erase(MonomialKey{});
  return out;
}

LadderSplit LadderPolynomial::split() const {
  LadderSplit s;
  for (const auto& [k, c] : terms_) {
    if (k.constant())
      s.constant += c;
    else if (k.pure_a())
      s.pure_a.add_term(k, c);
    else if (k.pure_b())
      s.pure_b.add_term(k, c);
    else
      s.coupling.add_term(k, c);
  }
  return s;
}

void LadderPolynomial::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

namespace {

// Cache of ladder powers for matrix assembly.
struct PowerCache {
  std::vector<Eigen::MatrixXd> raise, lower;
  explicit PowerCache(int dim, int max_pow) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    raise.resize(max_pow + 1);
    lower.resize(max_pow + 1);
    raise[0] = lower[0] = Eigen::MatrixXd::Identity(dim, dim);
    for (int p = 1; p <= max_pow; ++p) {
      lower[p] = lower[p - 1] * a;
      raise[p] = raise[p - 1] * a.transpose();
    }
  }
};

}  // namespace

Eigen::MatrixXcd LadderPolynomial::to_matrix(const FockSpace& s) const {
  const int deg = max_degree();
  PowerCache ca(s.dim_a, deg), cb(s.dim_b, deg);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(s.size(), s.size());
  for (const auto& [k, c] : terms_) {
    const Eigen::MatrixXd Ma = ca.raise[k.p_adag] * ca.lower[k.p_a];
    const Eigen::MatrixXd Mb = cb.raise[k.q_bdag] * cb.lower[k.q_b];
    for (int ia = 0; ia < s.dim_a; ++ia)
      for (int ja = 0; ja < s.dim_a; ++ja) {
        if (Ma(ia, ja) == 0.0) continue;
        const Coef f = c * Ma(ia, ja);
        for (int ib = 0; ib < s.dim_b; ++ib)
          for (int jb = 0; jb < s.dim_b; ++jb) {
            if (Mb(ib, jb) == 0.0) continue;
            H(s.index(ia, ib), s.index(ja, jb)) += f * Mb(ib, jb);
          }
      }
  }
  return H;
}

Eigen::MatrixXcd LadderPolynomial::to_matrix_single(Mode m, int dim) const {
  PowerCache cc(dim, max_degree());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [k, c] : terms_) {
    if (m == Mode::a) {
      if (!k.pure_a()) throw std::invalid_argument("monomial not pure in mode a");
      H += c * (cc.raise[k.p_adag] * cc.lower[k.p_a]);
    } else {
      if (!k.pure_b()) throw std::invalid_argument("monomial not pure in mode b");
      H += c * (cc.raise[k.q_bdag] * cc.lower[k.q_b]);
    }
  }
  return H;
}

LadderPolynomial taylor_cosine_two_mode(double E, int n_series, double arg_a,
                                        double arg_b, int order) {
  if (order % 2 != 0) throw std::invalid_argument("Taylor order must be even");
  if (order < 2) throw std::invalid_argument("Taylor order must be >= 2");
  LadderPolynomial arg;
  if (arg_a != 0.0) arg += LadderPolynomial::phi(Mode::a, arg_a);
  if (arg_b != 0.0) arg += LadderPolynomial::phi(Mode::b, arg_b);
  LadderPolynomial out;
  LadderPolynomial arg_sq = arg * arg;
  LadderPolynomial pw = LadderPolynomial::constant(1.0);
  double fact = 1.0;  // (2m)!
  for (int m = 1; 2 * m <= order; ++m) {
    pw = pw * arg_sq;
    fact *= double(2 * m - 1) * double(2 * m);
    const double coef =
        -double(n_series) * E * ((m % 2 == 0) ? 1.0 : -1.0) / (std::pow(double(n_series), 2 * m) * fact);
    out += pw * LadderPolynomial::Coef(coef, 0.0);
  }
  return out.without_constant();
}

LadderPolynomial taylor_potential(double E, int n_series, double zpf, int order, Mode mode) {
  if (zpf <= 0.0) throw std::invalid_argument("zpf must be positive");
  return mode == Mode::a ? taylor_cosine_two_mode(E, n_series, zpf, 0.0, order)
                         : taylor_cosine_two_mode(E, n_series, 0.0, zpf, order);
}

}  // namespace qrt
