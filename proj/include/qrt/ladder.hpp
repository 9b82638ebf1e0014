#pragma once

#include <complex>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace qrt {

struct FockSpace {
  int dim_a = 25;
  int dim_b = 25;
  // Tensor ordering is fixed across the whole library: mode a (x) mode b,
  // basis index = n_a * dim_b + n_b.
  int size() const { return dim_a * dim_b; }
  int index(int n_a, int n_b) const { return n_a * dim_b + n_b; }
};

enum class Mode { a, b };

// Powers of a normal-ordered two-mode ladder monomial
// adag^p_adag a^p_a bdag^q_bdag b^q_b.
struct MonomialKey {
  int p_adag = 0;
  int p_a = 0;
  int q_bdag = 0;
  int q_b = 0;
  auto operator<=>(const MonomialKey&) const = default;
  MonomialKey adjoint() const { return {p_a, p_adag, q_b, q_bdag}; }
  int degree() const { return p_adag + p_a + q_bdag + q_b; }
  bool pure_a() const { return q_bdag == 0 && q_b == 0; }
  bool pure_b() const { return p_adag == 0 && p_a == 0; }
  bool constant() const { return degree() == 0; }
};

class LadderPolynomial;

// Partition of a polynomial: terms acting on mode a only / mode b only /
// both modes / the constant.
struct LadderSplit;

// Normal-ordered polynomial in two modes' ladder operators. Terms are keyed
// by power tuple; no two terms share a tuple and zero coefficients are
// pruned on the fly. Immutable-by-convention after construction.
class LadderPolynomial {
 public:
  using Coef = std::complex<double>;
  using TermMap = std::map<MonomialKey, Coef>;

  LadderPolynomial() = default;
  static LadderPolynomial monomial(const MonomialKey& k, Coef c);
  static LadderPolynomial constant(Coef c) { return monomial({}, c); }
  // phi = zpf (x + xdag), n = i n_zpf (xdag - x), n_zpf = 1/(2 zpf)
  static LadderPolynomial phi(Mode m, double zpf);
  static LadderPolynomial charge(Mode m, double zpf);

  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coef coeff(const MonomialKey& k) const;
  int max_degree() const;
  double max_abs_coeff() const;

  LadderPolynomial& operator+=(const LadderPolynomial& o);
  LadderPolynomial& operator-=(const LadderPolynomial& o);
  LadderPolynomial& operator*=(Coef c);
  friend LadderPolynomial operator+(LadderPolynomial l, const LadderPolynomial& r) {
    l += r;
    return l;
  }
  friend LadderPolynomial operator-(LadderPolynomial l, const LadderPolynomial& r) {
    l -= r;
    return l;
  }
  friend LadderPolynomial operator*(LadderPolynomial l, Coef c) {
    l *= c;
    return l;
  }
  // Normal-ordered product (exact commutator bookkeeping per mode).
  friend LadderPolynomial operator*(const LadderPolynomial& l, const LadderPolynomial& r);

  LadderPolynomial adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  LadderPolynomial without_constant() const;

  LadderSplit split() const;

  // Dense matrix in the given space. Valid on Fock levels below
  // dim - max_degree(); entries touching the truncation edge are inexact.
  Eigen::MatrixXcd to_matrix(const FockSpace& s) const;
  // Single-mode variant (monomials must be pure in the requested mode).
  Eigen::MatrixXcd to_matrix_single(Mode m, int dim) const;

  void prune(double eps = 0.0);

 private:
  void add_term(const MonomialKey& k, Coef c);
  void check_overflow() const;
  TermMap terms_;
};

struct LadderSplit {
  LadderPolynomial pure_a, pure_b, coupling;
  LadderPolynomial::Coef constant{0.0, 0.0};
};

// Normal-ordered expansion of -n_series * E * cos(phi / n_series) with
// phi = zpf (x + xdag) on the requested mode, constant term dropped.
// Throws std::invalid_argument for odd order, std::overflow_error when
// coefficients blow up (Taylor order too high for the zpf scale).
LadderPolynomial taylor_potential(double E, int n_series, double zpf, int order,
                                  Mode mode = Mode::a);

// Two-mode generalization for coupler branches: argument ca*phi_a + cb*phi_b
// (zpf factors folded into ca, cb by the caller).
LadderPolynomial taylor_cosine_two_mode(double E, int n_series, double arg_a,
                                        double arg_b, int order);

}  // namespace qrt
