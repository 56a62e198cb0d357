#include "asymcorr/picard_fuchs.hpp"

#include <algorithm>
#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

// ---------------------------------------------------------------- ThetaPoly

ThetaPoly::ThetaPoly(const LambdaPoly& c) {
  if (!c.is_zero()) c_.push_back(c);
}

ThetaPoly ThetaPoly::linear(const Rational& alpha, const LambdaPoly& beta) {
  ThetaPoly p;
  p.c_ = {beta, LambdaPoly(alpha)};
  p.trim();
  return p;
}

const LambdaPoly& ThetaPoly::coefficient(int i) const {
  static const LambdaPoly zero;
  return i < 0 || i >= static_cast<int>(c_.size()) ? zero : c_[static_cast<std::size_t>(i)];
}

void ThetaPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

ThetaPoly& ThetaPoly::operator+=(const ThetaPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

ThetaPoly& ThetaPoly::operator-=(const ThetaPoly& o) { return *this += -o; }

ThetaPoly& ThetaPoly::operator*=(const ThetaPoly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<LambdaPoly> out(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  c_ = std::move(out);
  trim();
  return *this;
}

ThetaPoly ThetaPoly::operator-() const {
  ThetaPoly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

ThetaPoly ThetaPoly::shifted(const Rational& b) const {
  // Horner in (theta + b)
  ThetaPoly out;
  ThetaPoly x = linear(1, LambdaPoly(b));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    out *= x;
    out += ThetaPoly(*it);
  }
  return out;
}

ThetaPoly ThetaPoly::scaled(const Rational& s) const {
  ThetaPoly out = *this;
  Rational f = 1;
  for (auto& c : out.c_) {
    c *= f;
    f *= s;
  }
  out.trim();
  return out;
}

HPoly ThetaPoly::evaluate(const LinearForm& e, int nil) const {
  HPoly x = e.to_hpoly(nil);
  HPoly out(nil);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    out *= x;
    out += HPoly(nil, *it);
  }
  return out;
}

LambdaPoly ThetaPoly::evaluate(const Rational& x) const {
  LambdaPoly out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    out *= x;
    out += *it;
  }
  return out;
}

std::optional<ThetaPoly> ThetaPoly::divide_linear(const Rational& root) const {
  if (c_.empty()) return ThetaPoly();
  // synthetic division
  std::vector<LambdaPoly> q(c_.size() - 1);
  LambdaPoly carry;
  for (std::size_t i = c_.size(); i-- > 0;) {
    LambdaPoly v = c_[i] + carry * root;
    if (i == 0) {
      if (!v.is_zero()) return std::nullopt;
      break;
    }
    q[i - 1] = v;
    carry = v;
  }
  ThetaPoly out;
  out.c_ = std::move(q);
  out.trim();
  return out;
}

std::string ThetaPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    bool simple = c_[i] == LambdaPoly(1) && i > 0;
    if (!simple) os << (c_[i].terms().size() > 1 && i > 0 ? "(" + c_[i].to_string() + ")" : c_[i].to_string());
    if (i > 0) {
      if (!simple) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

ThetaPoly falling_product(const Rational& alpha, const LambdaPoly& beta, long count) {
  ThetaPoly p(LambdaPoly(1));
  for (long l = 0; l < count; ++l) p *= ThetaPoly::linear(alpha, beta - LambdaPoly(Rational(l)));
  return p;
}

// ---------------------------------------------------------------- ThetaOperator

ThetaOperator ThetaOperator::monomial(Variable v, const Rational& power, const ThetaPoly& p) {
  ThetaOperator op(v);
  op.add(power, p);
  return op;
}

void ThetaOperator::add(const Rational& power, const ThetaPoly& p) {
  if (p.is_zero()) return;
  auto it = terms_.find(power);
  if (it == terms_.end()) {
    terms_.emplace(power, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) terms_.erase(it);
}

int ThetaOperator::order() const {
  int o = 0;
  for (const auto& [a, p] : terms_) o = std::max(o, p.degree());
  return o;
}

Rational ThetaOperator::min_power() const { return terms_.empty() ? Rational(0) : terms_.begin()->first; }
Rational ThetaOperator::max_power() const { return terms_.empty() ? Rational(0) : terms_.rbegin()->first; }

ThetaOperator& ThetaOperator::operator+=(const ThetaOperator& o) {
  if (!o.terms_.empty() && !terms_.empty() && o.variable_ != variable_)
    fail(ErrorCode::VariableMismatch, "adding operators in different variables");
  if (terms_.empty()) variable_ = o.variable_;
  for (const auto& [a, p] : o.terms_) add(a, p);
  return *this;
}

ThetaOperator& ThetaOperator::operator-=(const ThetaOperator& o) { return *this += o.scaled(LambdaPoly(-1)); }

ThetaOperator operator*(const ThetaOperator& a, const ThetaOperator& b) {
  if (a.variable_ != b.variable_ && !a.terms_.empty() && !b.terms_.empty())
    fail(ErrorCode::VariableMismatch, "composing operators in different variables");
  ThetaOperator out(a.terms_.empty() ? b.variable_ : a.variable_);
  // v^a p(theta) v^b s(theta) = v^{a+b} p(theta + b) s(theta)
  for (const auto& [pa, p] : a.terms_)
    for (const auto& [pb, s] : b.terms_) out.add(pa + pb, p.shifted(pb) * s);
  return out;
}

ThetaOperator ThetaOperator::scaled(const LambdaPoly& c) const {
  ThetaOperator out(variable_);
  for (const auto& [a, p] : terms_) out.add(a, p * ThetaPoly(c));
  return out;
}

ThetaOperator ThetaOperator::left_shift(const Rational& c) const {
  ThetaOperator out(variable_);
  for (const auto& [a, p] : terms_) out.terms_.emplace(a + c, p);
  return out;
}

std::map<Rational, LambdaPoly> ThetaOperator::apply_to_monomial(const Rational& a) const {
  std::map<Rational, LambdaPoly> out;
  for (const auto& [b, p] : terms_) {
    LambdaPoly v = p.evaluate(a);
    if (!v.is_zero()) out[a + b] += v;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

std::string ThetaOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  std::string v = asymcorr::to_string(variable_);
  bool first = true;
  for (const auto& [a, p] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (a != 0) os << v << (a == 1 ? "" : "^" + asymcorr::to_string(a)) << "*";
    os << "(" << p.to_string() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------- builders

namespace {

// prod_j prod_{l<c_j} (alpha_j theta - l - a^j) with alpha_j = scale * c_j
ThetaPoly coordinate_product(const FermatInput& in, const std::vector<Rational>& a, const Rational& scale) {
  ThetaPoly p(LambdaPoly(1));
  for (std::size_t j = 0; j < in.n(); ++j) p *= falling_product(scale * in.c[j], LambdaPoly(-a[j]), in.c[j]);
  return p;
}

}  // namespace

ThetaOperator build_regularized_pf(const GroupData& group, const std::vector<Rational>& a) {
  const auto& in = group.input;
  long r = group.r;
  if (r <= 0) fail(ErrorCode::InvalidInput, "regularized quotient-side operator needs r > 0");
  Rational rr(r), dd(in.d);
  ThetaPoly sing = coordinate_product(in, a, Rational(-1) / rr);
  ThetaPoly base = falling_product(dd / rr, LambdaPoly::monomial(-dd, 1), in.d) * falling_product(1, LambdaPoly(), r);
  return ThetaOperator::monomial(Variable::tau, rr, sing) - ThetaOperator::monomial(Variable::tau, 0, base);
}

ThetaOperator build_pf_Y(const GroupData& group, const std::vector<Rational>& a) {
  const auto& in = group.input;
  Rational dd(in.d);
  ThetaPoly base = coordinate_product(in, a, 1);
  ThetaPoly up = falling_product(-dd, LambdaPoly::monomial(-dd, 1), in.d);
  return ThetaOperator::monomial(Variable::q, 0, base) - ThetaOperator::monomial(Variable::q, 1, up);
}

ThetaOperator build_pf_X(const GroupData& group, const std::vector<Rational>& a) {
  const auto& in = group.input;
  Rational dd(in.d);
  ThetaPoly base = falling_product(1, LambdaPoly::monomial(-dd, 1), in.d);
  ThetaPoly up = coordinate_product(in, a, Rational(-1) / dd);
  return ThetaOperator::monomial(Variable::t, 0, base) - ThetaOperator::monomial(Variable::t, dd, up);
}

ThetaOperator build_D_t(const GroupData& group, std::size_t gbar) {
  const auto& in = group.input;
  const auto& m = group.elements[gbar].multiplicities();
  if (m[0] != 0) fail(ErrorCode::InvalidInput, "coset representative must fix the first coordinate");
  Rational dd(in.d);
  ThetaPoly base = falling_product(1, LambdaPoly(), in.d);
  ThetaPoly up = coordinate_product(in, m, Rational(-1) / dd);
  return ThetaOperator::monomial(Variable::t, 0, base) - ThetaOperator::monomial(Variable::t, dd, up);
}

ThetaOperator lowering_operator(const GroupData& group, const std::vector<Rational>& a) {
  const auto& in = group.input;
  std::vector<Rational> m = group.elements[group.index_of_reduced(a)].multiplicities();
  ThetaPoly p(LambdaPoly(1));
  for (std::size_t j = 0; j < in.n(); ++j) {
    long M = to_long(a[j] - m[j]);
    p *= falling_product(Rational(in.c[j]), LambdaPoly(-m[j]), M);
  }
  return ThetaOperator::monomial(Variable::q, 0, p);
}

// ---------------------------------------------------------------- factorization

ThetaOperator PFFactorization::compose() const {
  ThetaOperator out = irr * right;
  for (auto it = left.rbegin(); it != left.rend(); ++it)
    out = ThetaOperator::monomial(irr.variable(), 0, ThetaPoly::linear(1, LambdaPoly(Rational(-*it)))) * out;
  return out;
}

PFFactorization factor_pf(const ThetaOperator& d, const GroupData& group, std::size_t gbar) {
  const Variable v = d.variable();
  PFFactorization f;
  f.right = ThetaOperator::monomial(v, 0, ThetaPoly::theta());
  for (long k = 1; k < group.input.d; ++k)
    if (group.elements[group.jay_times(k, gbar)].fixed_count() > 0) f.left.push_back(k);

  // strip left factors: (theta - k) v^a Q = v^a (theta + a - k) Q
  ThetaOperator cur = d;
  for (long k : f.left) {
    ThetaOperator next(v);
    for (const auto& [a, p] : cur.terms()) {
      auto q = p.divide_linear(Rational(k) - a);
      if (!q) fail(ErrorCode::FactorMismatch, "left factor (theta - " + std::to_string(k) + ") does not divide");
      next += ThetaOperator::monomial(v, a, *q);
    }
    cur = next;
  }
  // strip the right theta
  ThetaOperator irr(v);
  for (const auto& [a, p] : cur.terms()) {
    auto q = p.divide_linear(0);
    if (!q) fail(ErrorCode::FactorMismatch, "right factor theta does not divide");
    irr += ThetaOperator::monomial(v, a, *q);
  }
  f.irr = irr;
  if (f.compose() != d) fail(ErrorCode::FactorMismatch, "recomposed operator differs");
  return f;
}

bool verify_on_monomials(const ThetaOperator& d, const PFFactorization& f, long max_a) {
  auto apply_sum = [](const ThetaOperator& op, const std::map<Rational, LambdaPoly>& in) {
    std::map<Rational, LambdaPoly> out;
    for (const auto& [a, c] : in)
      for (const auto& [b, v] : op.apply_to_monomial(a)) out[b] += v * c;
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  };
  const Variable v = d.variable();
  for (long a = 0; a <= max_a; ++a) {
    std::map<Rational, LambdaPoly> mono{{Rational(a), LambdaPoly(1)}};
    auto lhs = apply_sum(d, mono);
    auto rhs = apply_sum(f.irr, apply_sum(f.right, mono));
    for (auto it = f.left.rbegin(); it != f.left.rend(); ++it)
      rhs = apply_sum(ThetaOperator::monomial(v, 0, ThetaPoly::linear(1, LambdaPoly(Rational(-*it)))), rhs);
    if (lhs != rhs) return false;
  }
  return true;
}

// ---------------------------------------------------------------- application

QSeries apply(const ThetaOperator& op, const QSeries& s) {
  if (!op.is_zero() && op.variable() != s.variable)
    fail(ErrorCode::VariableMismatch, "operator in " + to_string(op.variable()) + ", series in " + to_string(s.variable));
  QSeries out = s;
  out.coeffs.clear();
  struct Contribution {
    HPoly value;
    std::optional<GammaFactor> g;
    std::size_t sector;
  };
  std::map<SeriesKey, std::vector<Contribution>> acc;
  for (const auto& [key, c] : s.coeffs) {
    LinearForm e = s.exponent(key.k0);
    for (const auto& [a, p] : op.terms()) {
      Rational dk = a / s.step;
      if (!is_integer(dk)) fail(ErrorCode::VariableMismatch, "operator power incompatible with the series step");
      SeriesKey out_key{key.k0 + to_long(dk), key.kbar};
      for (const auto& [sector, hp] : c.value.parts()) {
        HPoly v = p.evaluate(e, hp.nil()) * hp;
        std::optional<GammaFactor> g;
        if (c.inv_gamma) g = c.inv_gamma;
        acc[out_key].push_back({v, g, sector});
      }
    }
  }
  for (auto& [key, contribs] : acc) {
    std::optional<GammaFactor> target;
    for (const auto& ct : contribs)
      if (ct.g && (!target || ct.g->arg.constant > target->arg.constant)) target = ct.g;
    CohomClass total;
    for (const auto& ct : contribs) {
      HPoly v = ct.value;
      if (target) v *= ct.g->lift_to(*target).expand(v.nil());
      total += CohomClass::on_sector(ct.sector, v);
    }
    Coefficient oc;
    oc.value = total;
    oc.inv_gamma = target;
    out.coeffs.emplace(key, std::move(oc));
  }
  return out;
}

bool check_annihilation(const ThetaOperator& op, const QSeries& s) {
  QSeries res = apply(op, s);
  for (const auto& [key, c] : res.coeffs)
    if (key.k0 <= s.trunc.max_k0 && !c.value.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------- variable changes

ThetaOperator change_variable(const ThetaOperator& op, Variable w, const Rational& rho, int sign) {
  if (rho == 0) fail(ErrorCode::InvalidInput, "degenerate variable change");
  // v = sign w^rho: theta_v = theta_w / rho, v^a = sign^a w^{rho a}
  ThetaOperator out(w);
  for (const auto& [a, p] : op.terms()) {
    ThetaPoly np = p.scaled(Rational(1) / rho);
    if (sign == -1) {
      if (!is_integer(a)) fail(ErrorCode::InvalidInput, "sign flip needs integer powers");
      if (to_long(a) % 2) np = -np;
    }
    out += ThetaOperator::monomial(w, rho * a, np);
  }
  return out;
}

ThetaOperator laplace_conjugate(const ThetaOperator& op_tau) {
  if (op_tau.variable() != Variable::tau) fail(ErrorCode::VariableMismatch, "Laplace conjugation acts on tau");
  Rational top = op_tau.max_power();
  ThetaOperator out(Variable::u);
  // tau^{-n} P(theta) = (d/dtau)^n Q(theta) with P = prod_{l<n}(theta - l) Q
  for (const auto& [a, p] : op_tau.terms()) {
    Rational nr = top - a;
    if (!is_integer(nr)) fail(ErrorCode::NotInLaplaceNormalForm, "non-integer power gap");
    long n = to_long(nr);
    ThetaPoly q = p;
    for (long l = 0; l < n; ++l) {
      auto d = q.divide_linear(Rational(l));
      if (!d) fail(ErrorCode::NotInLaplaceNormalForm, "coefficient not divisible by the falling factorial");
      q = *d;
    }
    out += ThetaOperator::monomial(Variable::u, Rational(n), q.scaled(-1));
  }
  return out;
}

ThetaOperator borel_conjugate(const ThetaOperator& op_u) {
  if (op_u.variable() != Variable::u) fail(ErrorCode::VariableMismatch, "Borel conjugation acts on u");
  ThetaOperator shifted = op_u.left_shift(-op_u.min_power());
  Rational top = shifted.max_power();
  ThetaOperator out(Variable::tau);
  // u^n Q(theta_u) -> (d/dtau)^n Q(-theta_tau) = tau^{-n} prod_{l<n}(theta - l) Q(-theta)
  for (const auto& [b, q] : shifted.terms()) {
    if (!is_integer(b)) fail(ErrorCode::NotInLaplaceNormalForm, "non-integer u power");
    long n = to_long(b);
    ThetaPoly p = falling_product(1, LambdaPoly(), n) * q.scaled(-1);
    out += ThetaOperator::monomial(Variable::tau, top - b, p);
  }
  return out;
}

ThetaOperator borel_ode(const ThetaOperator& op_s, const Rational& kappa, int sign) {
  return borel_conjugate(change_variable(op_s, Variable::u, -kappa, sign));
}

// ---------------------------------------------------------------- singular locus

std::vector<Rational> SingularLocus::exact_points() const {
  if (power == 1) return {value};
  return {};
}

std::string SingularLocus::to_string() const {
  std::string v = asymcorr::to_string(variable);
  if (power == 0) return "{0, inf}";
  return "{0, inf} + {" + v + ": " + v + (power == 1 ? "" : "^" + std::to_string(power)) + " = " +
         asymcorr::to_string(value) + "}";
}

SingularLocus singular_locus(const ThetaOperator& op) {
  SingularLocus s;
  s.variable = op.variable();
  int m = op.order();
  std::vector<std::pair<Rational, Rational>> lead;
  for (const auto& [a, p] : op.terms()) {
    const LambdaPoly& c = p.coefficient(m);
    if (c.is_zero()) continue;
    if (!c.is_constant()) fail(ErrorCode::InvalidInput, "leading coefficient depends on lambda");
    lead.emplace_back(a, c.coefficient(0));
  }
  if (lead.size() == 1) {
    s.power = 0;
    return s;
  }
  if (lead.size() != 2) fail(ErrorCode::InvalidInput, "singular locus supports two-term operators");
  Rational gap = lead[1].first - lead[0].first;
  if (!is_integer(gap)) fail(ErrorCode::InvalidInput, "non-integer power gap");
  s.power = to_long(gap);
  s.value = -lead[0].second / lead[1].second;
  return s;
}

}  // namespace asymcorr
