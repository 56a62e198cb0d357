#include "asymcorr/zseries.hpp"

#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

ZHPoly ZHPoly::term(const Rational& zexp, const HPoly& p) {
  ZHPoly z(p.nil());
  z.add(zexp, p);
  return z;
}

ZHPoly ZHPoly::linear(int nil, const Rational& a, const Rational& b, const Rational& c) {
  ZHPoly z(nil);
  z.add(0, HPoly(nil, LambdaPoly::monomial(a, 1)) + HPoly::monomial(nil, 1, LambdaPoly(b)));
  z.add(1, HPoly(nil, LambdaPoly(c)));
  return z;
}

ZHPoly ZHPoly::inverse_unit(int nil, const Rational& b, const Rational& c) {
  if (c == 0) fail(ErrorCode::NonInvertible, "form has no z part");
  // (c z)^{-1} sum_n (-b H / (c z))^n
  ZHPoly z(nil);
  Rational ratio = -b / c;
  Rational coeff = Rational(1) / c;
  for (int n = 0; n < nil; ++n) {
    z.add(Rational(-1 - n), HPoly::monomial(nil, n, LambdaPoly(coeff)));
    coeff *= ratio;
  }
  return z;
}

void ZHPoly::add(const Rational& e, const HPoly& p) {
  if (p.is_zero()) return;
  auto it = parts_.find(e);
  if (it == parts_.end()) {
    parts_.emplace(e, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) parts_.erase(it);
}

ZHPoly& ZHPoly::operator+=(const ZHPoly& o) {
  for (const auto& [e, p] : o.parts_) add(e, p);
  return *this;
}

ZHPoly& ZHPoly::operator*=(const ZHPoly& o) {
  ZHPoly out(nil_);
  for (const auto& [e1, p1] : parts_)
    for (const auto& [e2, p2] : o.parts_) out.add(e1 + e2, p1 * p2);
  *this = std::move(out);
  return *this;
}

ZHPoly& ZHPoly::operator*=(const Rational& c) {
  if (c == 0) {
    parts_.clear();
    return *this;
  }
  for (auto& [e, p] : parts_) p *= LambdaPoly(c);
  return *this;
}

bool ZHPoly::operator==(const ZHPoly& o) const { return parts_ == o.parts_; }

ZHPoly ZHPoly::shifted(const Rational& e) const {
  ZHPoly out(nil_);
  for (const auto& [k, p] : parts_) out.parts_.emplace(k + e, p);
  return out;
}

HPoly ZHPoly::at_z_one() const {
  HPoly out(nil_);
  for (const auto& [e, p] : parts_) out += p;
  return out;
}

std::string ZHPoly::to_string() const {
  if (parts_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, p] : parts_) {
    if (!first) os << " + ";
    first = false;
    os << "z^(" << asymcorr::to_string(e) << ")*(" << p.to_string() << ")";
  }
  return os.str();
}

bool ZSeries::operator==(const ZSeries& o) const {
  if (variable != o.variable || space != o.space || !(prefactor == o.prefactor) || offset != o.offset ||
      step != o.step)
    return false;
  auto nonzero = [](const ZClass& c) {
    for (const auto& [s, p] : c)
      if (!p.is_zero()) return true;
    return false;
  };
  auto covered = [&](const ZSeries& a, const ZSeries& b) {
    for (const auto& [key, c] : a.coeffs) {
      auto it = b.coeffs.find(key);
      if (it == b.coeffs.end()) {
        if (nonzero(c)) return false;
        continue;
      }
      for (const auto& [s, p] : c) {
        auto jt = it->second.find(s);
        if (jt == it->second.end() ? !p.is_zero() : jt->second != p) return false;
      }
      for (const auto& [s, p] : it->second)
        if (!c.count(s) && !p.is_zero()) return false;
    }
    return true;
  };
  return covered(*this, o) && covered(o, *this);
}

GradingData GradingData::make(const GroupData& group, SpaceTag space) {
  if (space != SpaceTag::X && space != SpaceTag::Y)
    fail(ErrorCode::UnknownGrade, "grading is defined for the X and Y sides only");
  GradingData g;
  g.space = space;
  SectorBasis basis = SectorBasis::make(group, space);
  for (const auto& e : basis.entries()) {
    const GroupElement& s = group.elements[e.sector];
    Rational gr = space == SpaceTag::X ? age(s) : age(-s);
    g.entry_grade[e] = gr + e.h_power;
  }
  for (const auto& gen : group.gbar_generators) g.coordinate_grade.push_back(1 - age(gen));
  return g;
}

const Rational& GradingData::grade(const BasisEntry& e) const {
  auto it = entry_grade.find(e);
  if (it == entry_grade.end())
    fail(ErrorCode::UnknownGrade, "no grade for sector " + std::to_string(e.sector) + " H^" +
                                      std::to_string(e.h_power));
  return it->second;
}

namespace {

Rational variable_shift(const QSeries& s, const GroupData& group, long k0) {
  Rational e = s.offset + s.step * k0;
  if (s.space == SpaceTag::X) return e * make_rational(group.r, group.input.d);
  return e * Rational(-group.r);
}

}  // namespace

ZSeries restore_z(const QSeries& at_z1, const GradingData& grading, const GroupData& group) {
  if (at_z1.space != grading.space || (at_z1.space != SpaceTag::X && at_z1.space != SpaceTag::Y))
    fail(ErrorCode::VariableMismatch, "restore_z needs an X or Y series with matching grading");
  ZSeries out;
  out.variable = at_z1.variable;
  out.space = at_z1.space;
  out.prefactor = at_z1.prefactor;
  out.offset = at_z1.offset;
  out.step = at_z1.step;
  out.trunc = at_z1.trunc;
  for (const auto& [key, c] : at_z1.coeffs) {
    Rational base = 1 + variable_shift(at_z1, group, key.k0);
    for (std::size_t s = 0; s < key.kbar.size(); ++s) {
      if (s >= grading.coordinate_grade.size()) fail(ErrorCode::UnknownGrade, "coordinate without a grade");
      base -= grading.coordinate_grade[s] * key.kbar[s];
    }
    ZClass zc;
    for (const auto& [sector, hp] : c.value.parts()) {
      ZHPoly z(hp.nil());
      for (int b = 0; b < hp.nil(); ++b) {
        if (hp[b].is_zero()) continue;
        Rational gr = grading.grade({sector, b});
        for (const auto& [a, coeff] : hp[b].terms())
          z += ZHPoly::term(base - gr - a, HPoly::monomial(hp.nil(), b, LambdaPoly::monomial(coeff, a)));
      }
      if (!z.is_zero()) zc.emplace(sector, std::move(z));
    }
    out.coeffs.emplace(key, std::move(zc));
  }
  return out;
}

QSeries set_z_to_one(const ZSeries& s, const GroupData& group) {
  QSeries out;
  out.variable = s.variable;
  out.space = s.space;
  out.basis = SectorBasis::make(group, s.space);
  out.prefactor = s.prefactor;
  out.offset = s.offset;
  out.step = s.step;
  out.trunc = s.trunc;
  for (const auto& [key, zc] : s.coeffs) {
    CohomClass v;
    for (const auto& [sector, z] : zc) v += CohomClass::on_sector(sector, z.at_z_one());
    out.coeffs[key].value = v;
  }
  return out;
}

namespace {

Rational kbar_factorial(const std::vector<int>& kbar) {
  Rational f = 1;
  for (int k : kbar) f *= factorial(k);
  return f;
}

// z * prod_g z^{(age(g) - 1) k_g} / k_g!
ZHPoly coordinate_part(const GroupData& group, const std::vector<int>& kbar, int nil) {
  Rational e = 1;
  for (std::size_t s = 0; s < kbar.size(); ++s) e += (age(group.gbar_generators[s]) - 1) * kbar[s];
  return ZHPoly::term(e, HPoly(nil, LambdaPoly(Rational(1) / kbar_factorial(kbar))));
}

}  // namespace

ZSeries build_IX_z(const GroupData& group, const Truncation& trunc) {
  if (trunc.max_k0 < 1) fail(ErrorCode::TruncationTooSmall, "max k0 must be at least 1");
  const auto& in = group.input;
  ZSeries out;
  out.variable = Variable::t;
  out.space = SpaceTag::X;
  out.prefactor = {Rational(in.d), 0};
  out.trunc = trunc;
  for (const auto& kbar : multi_indices(group.gbar_generators.size(), trunc.max_kbar)) {
    auto a = weighted_multiplicities(group, kbar);
    int ksum = 0;
    for (int k : kbar) ksum += k;
    for (long k0 = 0; k0 <= trunc.max_k0; ++k0) {
      // z t^{d lambda/z} (t^g)^k / (z^k k!) M(k0, k) t^k0 / (z^k0 k0!)
      ZHPoly m = ZHPoly::term(Rational(1 - k0 - ksum),
                              HPoly(1, LambdaPoly(Rational(1) / (factorial(k0) * kbar_factorial(kbar)))));
      std::vector<Rational> y(in.n());
      for (std::size_t j = 0; j < in.n(); ++j) {
        y[j] = in.weight(j) * k0 + a[j];
        for (Rational b = frac(y[j]); b < y[j]; b += 1) m *= ZHPoly::linear(1, Rational(-in.c[j]), 0, -b);
      }
      if (m.is_zero()) continue;
      out.coeffs[{k0, kbar}].emplace(group.index_of_reduced(y), std::move(m));
    }
  }
  return out;
}

ZSeries build_IY_z(const GroupData& group, const Truncation& trunc) {
  if (trunc.max_k0 < 1) fail(ErrorCode::TruncationTooSmall, "max k0 must be at least 1");
  const auto& in = group.input;
  SectorBasis basis = SectorBasis::make(group, SpaceTag::Y);
  Rational sum_q = make_rational(in.sum_c(), in.d);
  Rational dd(in.d);
  ZSeries out;
  out.variable = Variable::q;
  out.space = SpaceTag::Y;
  out.prefactor = {0, 1};
  out.step = make_rational(1, in.d);
  out.trunc = trunc;
  for (const auto& kbar : multi_indices(group.gbar_generators.size(), trunc.max_kbar)) {
    auto a = weighted_multiplicities(group, kbar);
    for (long k0 = 0; k0 <= trunc.max_k0; ++k0) {
      std::vector<Rational> x(in.n());
      Rational frac_sum = 0;
      for (std::size_t j = 0; j < in.n(); ++j) {
        x[j] = a[j] - in.weight(j) * k0;
        frac_sum += frac(-x[j]);
      }
      std::size_t sector = group.index_of_reduced(x);
      int nil = basis.nil(sector);
      if (nil == 0) continue;
      ZHPoly c = coordinate_part(group, kbar, nil);
      c = c.shifted(-Rational(k0) * (sum_q - 1) - frac_sum);
      // Gamma(1 - d(lambda+H)/z) / Gamma(1 - k0 - d(lambda+H)/z) = prod_{l=1}^{k0} (-d(lambda+H) - (k0-l) z) / z
      for (long l = 1; l <= k0; ++l) c *= ZHPoly::linear(nil, -dd, -dd, Rational(l - k0)).shifted(-1);
      // Gamma(A) / Gamma(A - n), A = 1 + c_j H/z - frac(x), n = floor(x)
      for (std::size_t j = 0; j < in.n(); ++j) {
        Rational cj(in.c[j]);
        Rational A0 = 1 - frac(x[j]);
        long n = floor_long(x[j]);
        for (long l = 1; l <= n; ++l) c *= ZHPoly::linear(nil, 0, cj, A0 - l).shifted(-1);
        for (long l = 0; l < -n; ++l) c *= ZHPoly::inverse_unit(nil, cj, A0 + l).shifted(1);
      }
      if (c.is_zero()) continue;
      out.coeffs[{k0, kbar}].emplace(sector, std::move(c));
    }
  }
  return out;
}

}  // namespace asymcorr
