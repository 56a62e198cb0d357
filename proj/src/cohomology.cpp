#include "asymcorr/cohomology.hpp"

#include <algorithm>
#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

// ---------------------------------------------------------------- LambdaPoly

LambdaPoly::LambdaPoly(const Rational& c) {
  if (c != 0) terms_[0] = c;
}

LambdaPoly LambdaPoly::monomial(const Rational& c, int exponent) {
  LambdaPoly p;
  if (c != 0) p.terms_[exponent] = c;
  return p;
}

Rational LambdaPoly::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

int LambdaPoly::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LambdaPoly::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
bool LambdaPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
bool LambdaPoly::has_limit_at_zero() const { return terms_.empty() || terms_.begin()->first >= 0; }

Rational LambdaPoly::at_zero() const {
  if (!has_limit_at_zero()) fail(ErrorCode::LambdaLimitUndefined, "negative lambda power in " + to_string());
  return coefficient(0);
}

void LambdaPoly::add_term(int e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  return out;
}

LambdaPoly& LambdaPoly::operator*=(const LambdaPoly& o) { return *this = *this * o; }

LambdaPoly& LambdaPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

std::string LambdaPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool unit = mag == 1 && e != 0;
    if (!unit) os << mag.get_str();
    if (e != 0) {
      if (!unit) os << "*";
      os << var;
      if (e != 1) os << "^" << e;
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- HPoly

HPoly::HPoly(int nil, const LambdaPoly& constant) : c_(static_cast<std::size_t>(nil)) {
  if (nil > 0) c_[0] = constant;
}

HPoly HPoly::monomial(int nil, int power, const LambdaPoly& coeff) {
  HPoly p(nil);
  if (power < nil) p[power] = coeff;
  return p;
}

bool HPoly::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const LambdaPoly& x) { return x.is_zero(); });
}

HPoly& HPoly::operator+=(const HPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

HPoly& HPoly::operator-=(const HPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

HPoly& HPoly::operator*=(const HPoly& o) {
  std::size_t n = std::min(c_.size(), o.c_.size());
  std::vector<LambdaPoly> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < n; ++j)
      if (!o.c_[j].is_zero()) out[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(out);
  return *this;
}

HPoly& HPoly::operator*=(const LambdaPoly& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

HPoly HPoly::operator-() const {
  HPoly out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

bool HPoly::operator==(const HPoly& o) const {
  std::size_t n = std::max(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const LambdaPoly zero;
    const LambdaPoly& a = i < c_.size() ? c_[i] : zero;
    const LambdaPoly& b = i < o.c_.size() ? o.c_[i] : zero;
    if (a != b) return false;
  }
  return true;
}

HPoly HPoly::truncated(int new_nil) const {
  HPoly out(new_nil);
  for (int i = 0; i < std::min(new_nil, nil()); ++i) out[i] = c_[static_cast<std::size_t>(i)];
  return out;
}

std::string HPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < nil(); ++i) {
    if ((*this)[i].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << (*this)[i].to_string() << ")";
    if (i > 0) os << "*H" << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- LinearForm

std::optional<Rational> LinearForm::ratio_to(const LinearForm& o) const {
  if (o.is_zero() || is_zero()) return std::nullopt;
  Rational c;
  if (o.constant != 0) c = constant / o.constant;
  else if (o.lambda_slope != 0) c = lambda_slope / o.lambda_slope;
  else c = h_slope / o.h_slope;
  if (c == 0) return std::nullopt;
  if (constant == c * o.constant && lambda_slope == c * o.lambda_slope && h_slope == c * o.h_slope) return c;
  return std::nullopt;
}

HPoly LinearForm::to_hpoly(int nil) const {
  HPoly p(nil);
  if (nil > 0) p[0] = LambdaPoly(constant) + LambdaPoly::monomial(lambda_slope, 1);
  if (nil > 1) p[1] = LambdaPoly(h_slope);
  return p;
}

std::string LinearForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto term = [&](const Rational& c, const char* sym) {
    if (c == 0) return;
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (!(mag == 1 && sym[0])) os << mag.get_str();
    if (sym[0]) os << (mag == 1 ? "" : "*") << sym;
    first = false;
  };
  term(lambda_slope, "λ");
  term(h_slope, "H");
  term(constant, "");
  return first ? "0" : os.str();
}

HPoly invert_form(const LinearForm& f, int nil) {
  if (nil == 0) return HPoly(0);
  // f = u + h*H with u = constant (lambda-free) or u = s*lambda (constant-free)
  LambdaPoly u_inv;
  if (f.lambda_slope == 0 && f.constant != 0) {
    u_inv = LambdaPoly(Rational(1) / f.constant);
  } else if (f.constant == 0 && f.lambda_slope != 0) {
    u_inv = LambdaPoly::monomial(Rational(1) / f.lambda_slope, -1);
  } else {
    fail(ErrorCode::NonInvertible, "form " + f.to_string() + " is not a unit");
  }
  // 1/(u + hH) = sum_k (-h)^k H^k u^{-k-1}
  HPoly out(nil);
  LambdaPoly pw = u_inv;
  for (int k = 0; k < nil; ++k) {
    out[k] = pw;
    pw *= u_inv;
    pw *= -f.h_slope;
  }
  return out;
}

// ---------------------------------------------------------------- LinearFactorProduct

bool LinearFactorProduct::is_zero() const {
  if (scalar_ == 0) return true;
  return std::any_of(numer_.begin(), numer_.end(), [](const LinearForm& f) { return f.is_zero(); });
}

LinearFactorProduct& LinearFactorProduct::multiply(const LinearForm& f) {
  if (f.lambda_slope == 0 && f.h_slope == 0) scalar_ *= f.constant;
  else numer_.push_back(f);
  return *this;
}

LinearFactorProduct& LinearFactorProduct::divide(const LinearForm& f) {
  if (f.is_zero()) fail(ErrorCode::NonInvertible, "division by the zero form");
  if (f.lambda_slope == 0 && f.h_slope == 0) scalar_ /= f.constant;
  else denom_.push_back(f);
  return *this;
}

LinearFactorProduct& LinearFactorProduct::operator*=(const LinearFactorProduct& o) {
  scalar_ *= o.scalar_;
  numer_.insert(numer_.end(), o.numer_.begin(), o.numer_.end());
  denom_.insert(denom_.end(), o.denom_.begin(), o.denom_.end());
  return *this;
}

LinearFactorProduct& LinearFactorProduct::operator*=(const Rational& c) {
  scalar_ *= c;
  return *this;
}

LinearFactorProduct& LinearFactorProduct::cancel() {
  for (auto dit = denom_.begin(); dit != denom_.end();) {
    bool removed = false;
    for (auto nit = numer_.begin(); nit != numer_.end(); ++nit) {
      if (auto c = nit->ratio_to(*dit)) {
        scalar_ *= *c;
        numer_.erase(nit);
        dit = denom_.erase(dit);
        removed = true;
        break;
      }
    }
    if (!removed) ++dit;
  }
  return *this;
}

LinearFactorProduct LinearFactorProduct::lambda_limit() const {
  LinearFactorProduct tmp = *this;
  tmp.cancel();
  LinearFactorProduct out(tmp.scalar_);
  for (auto f : tmp.numer_) {
    f.lambda_slope = 0;
    out.multiply(f);
  }
  for (auto f : tmp.denom_) {
    f.lambda_slope = 0;
    if (f.is_zero()) fail(ErrorCode::LambdaLimitUndefined, "denominator vanishes at lambda = 0");
    out.denom_.push_back(f);
  }
  out.cancel();
  for (const auto& f : out.denom_)
    if (f.constant == 0) fail(ErrorCode::LambdaLimitUndefined, "nilpotent denominator " + f.to_string() + " survives");
  // fold constant denominators into the scalar
  std::vector<LinearForm> rest;
  for (const auto& f : out.denom_) {
    if (f.h_slope == 0) out.scalar_ /= f.constant;
    else rest.push_back(f);
  }
  out.denom_ = std::move(rest);
  return out;
}

HPoly LinearFactorProduct::expand(int nil) const {
  HPoly out(nil, LambdaPoly(scalar_));
  if (scalar_ == 0 || nil == 0) return out;
  for (const auto& f : numer_) out *= f.to_hpoly(nil);
  for (const auto& f : denom_) out *= invert_form(f, nil);
  return out;
}

std::string LinearFactorProduct::to_string() const {
  std::ostringstream os;
  os << scalar_.get_str();
  for (const auto& f : numer_) os << "*(" << f.to_string() << ")";
  for (const auto& f : denom_) os << "/(" << f.to_string() << ")";
  return os.str();
}

LinearFactorProduct gamma_quotient(const LinearForm& a, const LinearForm& b) {
  if (a.lambda_slope != b.lambda_slope || a.h_slope != b.h_slope || !is_integer(a.constant - b.constant))
    fail(ErrorCode::NonIntegerOffset, "Gamma(" + a.to_string() + ")/Gamma(" + b.to_string() + ")");
  long n = to_long(a.constant - b.constant);
  LinearFactorProduct out;
  // Gamma(b + n)/Gamma(b) = prod_{l=0}^{n-1} (b + l)
  for (long l = 0; l < n; ++l) out.multiply(b + Rational(l));
  // Gamma(a)/Gamma(a + m) = 1/prod_{l=0}^{m-1} (a + l)
  for (long l = 0; l < -n; ++l) out.divide(a + Rational(l));
  return out;
}

LinearFactorProduct gamma_ratio(const LinearForm& x, long n) {
  return gamma_quotient(x + Rational(1), x + Rational(1 - n));
}

// ---------------------------------------------------------------- GammaFactor

bool GammaFactor::compatible(const GammaFactor& o) const {
  return arg.lambda_slope == o.arg.lambda_slope && arg.h_slope == o.arg.h_slope &&
         is_integer(arg.constant - o.arg.constant);
}

LinearFactorProduct GammaFactor::lift_to(const GammaFactor& target) const {
  if (!compatible(target)) fail(ErrorCode::NonIntegerOffset, "incompatible Gamma factors");
  long m = to_long(target.arg.constant - arg.constant);
  if (m < 0) fail(ErrorCode::NonIntegerOffset, "lift target below source");
  // 1/Gamma(A) = prod_{l<m}(A + l) / Gamma(A + m)
  LinearFactorProduct out;
  for (long l = 0; l < m; ++l) out.multiply(arg + Rational(l));
  return out;
}

std::string GammaFactor::to_string() const { return "1/Gamma(" + arg.to_string() + ")"; }

// ---------------------------------------------------------------- SectorBasis

std::string to_string(SpaceTag s) {
  switch (s) {
    case SpaceTag::X: return "X";
    case SpaceTag::Y: return "Y";
    case SpaceTag::FJRW: return "FJRW";
    case SpaceTag::Z: return "Z";
  }
  return "?";
}

SectorBasis SectorBasis::make(const GroupData& group, SpaceTag tag) {
  SectorBasis b;
  b.tag_ = tag;
  for (std::size_t i = 0; i < group.elements.size(); ++i) {
    const auto& g = group.elements[i];
    int nil = 0;
    switch (tag) {
      case SpaceTag::X: nil = 1; break;
      case SpaceTag::Y: nil = static_cast<int>(g.fixed_count()); break;
      case SpaceTag::Z: nil = std::max(0, static_cast<int>(g.fixed_count()) - 1); break;
      case SpaceTag::FJRW:
        nil = group.narrow[i] ? 1 : 0;
        if (nil) b.phase_[i] = age(g);
        break;
    }
    if (nil == 0) continue;
    b.nil_[i] = nil;
    for (int p = 0; p < nil; ++p) b.entries_.push_back({i, p});
  }
  return b;
}

int SectorBasis::nil(std::size_t sector) const {
  auto it = nil_.find(sector);
  return it == nil_.end() ? 0 : it->second;
}

Rational SectorBasis::phase(std::size_t sector) const {
  auto it = phase_.find(sector);
  return it == phase_.end() ? Rational(0) : it->second;
}

std::vector<BasisEntry> SectorBasis::block(const GroupData& group, std::size_t gbar) const {
  std::vector<BasisEntry> out;
  for (const auto& e : entries_)
    if (group.coset_of[e.sector] == gbar) out.push_back(e);
  std::sort(out.begin(), out.end(), [&](const BasisEntry& a, const BasisEntry& b) {
    long ka = group.jay_power[a.sector], kb = group.jay_power[b.sector];
    if (ka != kb) return ka < kb;
    return a.h_power < b.h_power;
  });
  return out;
}

std::vector<std::size_t> SectorBasis::sectors() const {
  std::vector<std::size_t> out;
  for (const auto& [s, n] : nil_) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------- CohomClass

CohomClass CohomClass::on_sector(std::size_t sector, const HPoly& value) {
  CohomClass c;
  if (!value.is_zero()) c.parts_[sector] = value;
  return c;
}

void CohomClass::prune() {
  for (auto it = parts_.begin(); it != parts_.end();) it = it->second.is_zero() ? parts_.erase(it) : std::next(it);
}

bool CohomClass::is_zero() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

const HPoly* CohomClass::part(std::size_t sector) const {
  auto it = parts_.find(sector);
  return it == parts_.end() ? nullptr : &it->second;
}

LambdaPoly CohomClass::component(const BasisEntry& e) const {
  const HPoly* p = part(e.sector);
  if (!p || e.h_power >= p->nil()) return LambdaPoly();
  return (*p)[e.h_power];
}

CohomClass& CohomClass::operator+=(const CohomClass& o) {
  for (const auto& [s, p] : o.parts_) {
    auto it = parts_.find(s);
    if (it == parts_.end()) parts_[s] = p;
    else it->second += p;
  }
  prune();
  return *this;
}

CohomClass& CohomClass::operator-=(const CohomClass& o) {
  for (const auto& [s, p] : o.parts_) {
    auto it = parts_.find(s);
    if (it == parts_.end()) parts_[s] = -p;
    else it->second -= p;
  }
  prune();
  return *this;
}

CohomClass& CohomClass::operator*=(const LambdaPoly& s) {
  for (auto& [k, p] : parts_) p *= s;
  prune();
  return *this;
}

CohomClass& CohomClass::multiply_each(const HPoly& q) {
  for (auto& [k, p] : parts_) p *= q.truncated(p.nil());
  prune();
  return *this;
}

CohomClass CohomClass::operator-() const {
  CohomClass out = *this;
  for (auto& [k, p] : out.parts_) p = -p;
  return out;
}

bool CohomClass::operator==(const CohomClass& o) const {
  CohomClass diff = *this - o;
  return diff.is_zero();
}

bool CohomClass::has_lambda_limit() const {
  for (const auto& [s, p] : parts_)
    for (int i = 0; i < p.nil(); ++i)
      if (!p[i].has_limit_at_zero()) return false;
  return true;
}

CohomClass CohomClass::lambda_limit() const {
  CohomClass out;
  for (const auto& [s, p] : parts_) {
    HPoly q(p.nil());
    for (int i = 0; i < p.nil(); ++i) q[i] = LambdaPoly(p[i].at_zero());
    if (!q.is_zero()) out.parts_[s] = q;
  }
  return out;
}

std::string CohomClass::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, p] : parts_) {
    if (!first) os << " + ";
    os << "[" << p.to_string() << "]_" << s;
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace asymcorr
