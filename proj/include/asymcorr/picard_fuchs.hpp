#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/series.hpp"

namespace asymcorr {

// Polynomial in theta with Laurent-in-lambda coefficients.
class ThetaPoly {
 public:
  ThetaPoly() = default;
  ThetaPoly(const LambdaPoly& c);  // NOLINT: constant embedding
  static ThetaPoly theta() { return linear(1, LambdaPoly()); }
  // alpha * theta + beta
  static ThetaPoly linear(const Rational& alpha, const LambdaPoly& beta);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const LambdaPoly& coefficient(int i) const;
  const LambdaPoly& leading() const { return c_.back(); }

  ThetaPoly& operator+=(const ThetaPoly& o);
  ThetaPoly& operator-=(const ThetaPoly& o);
  ThetaPoly& operator*=(const ThetaPoly& o);
  friend ThetaPoly operator+(ThetaPoly a, const ThetaPoly& b) { return a += b; }
  friend ThetaPoly operator-(ThetaPoly a, const ThetaPoly& b) { return a -= b; }
  friend ThetaPoly operator*(ThetaPoly a, const ThetaPoly& b) { return a *= b; }
  ThetaPoly operator-() const;
  bool operator==(const ThetaPoly& o) const { return c_ == o.c_; }

  // p(theta + b)
  ThetaPoly shifted(const Rational& b) const;
  // p(s * theta)
  ThetaPoly scaled(const Rational& s) const;
  // p(E) for an exponent form evaluated in H-truncated arithmetic.
  HPoly evaluate(const LinearForm& e, int nil) const;
  LambdaPoly evaluate(const Rational& x) const;
  // Exact quotient by (theta - root); nullopt if the remainder is nonzero.
  std::optional<ThetaPoly> divide_linear(const Rational& root) const;
  std::string to_string(const std::string& var = "θ") const;

 private:
  void trim();
  std::vector<LambdaPoly> c_;
};

// sum_a v^a p_a(theta) in left normal form, theta = v d/dv.
class ThetaOperator {
 public:
  ThetaOperator() = default;
  explicit ThetaOperator(Variable v) : variable_(v) {}
  static ThetaOperator monomial(Variable v, const Rational& power, const ThetaPoly& p);

  Variable variable() const { return variable_; }
  const std::map<Rational, ThetaPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int order() const;
  Rational min_power() const;
  Rational max_power() const;

  ThetaOperator& operator+=(const ThetaOperator& o);
  ThetaOperator& operator-=(const ThetaOperator& o);
  friend ThetaOperator operator+(ThetaOperator a, const ThetaOperator& b) { return a += b; }
  friend ThetaOperator operator-(ThetaOperator a, const ThetaOperator& b) { return a -= b; }
  // Composition: (A * B) f = A(B f).
  friend ThetaOperator operator*(const ThetaOperator& a, const ThetaOperator& b);
  ThetaOperator scaled(const LambdaPoly& c) const;
  // v^c * (*this)
  ThetaOperator left_shift(const Rational& c) const;
  bool operator==(const ThetaOperator& o) const { return variable_ == o.variable_ && terms_ == o.terms_; }
  bool operator!=(const ThetaOperator& o) const { return !(*this == o); }

  // Image of v^a as sum of monomials v^b with coefficients.
  std::map<Rational, LambdaPoly> apply_to_monomial(const Rational& a) const;
  std::string to_string() const;

 private:
  void add(const Rational& power, const ThetaPoly& p);
  Variable variable_ = Variable::q;
  std::map<Rational, ThetaPoly> terms_;
};

// prod_{l=0}^{count-1} (alpha theta - l + beta)
ThetaPoly falling_product(const Rational& alpha, const LambdaPoly& beta, long count);

// tau^r prod_j prod_{l<c_j} (-(c_j/r) theta - l - a^j) - prod_{l<d} ((d/r) theta - d lambda - l) prod_{l<r} (theta - l)
ThetaOperator build_regularized_pf(const GroupData& group, const std::vector<Rational>& a);
// prod_j prod_{l<c_j} (c_j theta - l - a^j) - q prod_{l<d} (-d theta - d lambda - l)
ThetaOperator build_pf_Y(const GroupData& group, const std::vector<Rational>& a);
// prod_{l<d} (theta - d lambda - l) - t^d prod_j prod_{l<c_j} (-(c_j/d) theta - l - a^j)
ThetaOperator build_pf_X(const GroupData& group, const std::vector<Rational>& a);
// Nonequivariant X operator for a gbar coset (a = m(gbar)).
ThetaOperator build_D_t(const GroupData& group, std::size_t gbar);
// prod_j prod_{l<M_j} (c_j theta - l - m_j(gbar)), M_j = a^j - m_j(gbar).
ThetaOperator lowering_operator(const GroupData& group, const std::vector<Rational>& a);

struct PFFactorization {
  std::vector<long> left;  // factors (theta - k), outermost first
  ThetaOperator irr;
  ThetaOperator right;     // theta

  ThetaOperator compose() const;
};

// D = prod (theta - k) * D_irr * theta; throws FactorMismatch if the identity fails.
PFFactorization factor_pf(const ThetaOperator& d, const GroupData& group, std::size_t gbar);
// Applies D and the factored form to v^a for a = 0..max_a and compares.
bool verify_on_monomials(const ThetaOperator& d, const PFFactorization& f, long max_a);

// Residual of op applied to a series; keys shift by power / step.
QSeries apply(const ThetaOperator& op, const QSeries& s);
// All residual coefficients with k0 <= truncation vanish.
bool check_annihilation(const ThetaOperator& op, const QSeries& s);

// Old variable v = sign * w^rho, expressed in w.
ThetaOperator change_variable(const ThetaOperator& op, Variable w, const Rational& rho, int sign = 1);
// tau-operator in (d/dtau)^n normal form -> u-operator, via alpha theta_tau + beta -> -alpha theta_u + beta.
ThetaOperator laplace_conjugate(const ThetaOperator& op_tau);
// u-operator -> tau-operator annihilating the Borel transform; inverse of laplace_conjugate up to a
// left monomial.
ThetaOperator borel_conjugate(const ThetaOperator& op_u);
// Operator for w^{kappa E}/Gamma(1 + kappa E) series given the operator of the series in s = sigma u^{-kappa}.
ThetaOperator borel_ode(const ThetaOperator& op_s, const Rational& kappa, int sign);

// Finite nonzero singular points of a two-term operator: v^power = value.
struct SingularLocus {
  Variable variable = Variable::tau;
  long power = 1;
  Rational value = 0;
  // Exact points when power == 1, empty otherwise.
  std::vector<Rational> exact_points() const;
  std::string to_string() const;
};
SingularLocus singular_locus(const ThetaOperator& op);

}  // namespace asymcorr
