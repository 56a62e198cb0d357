#include "asymcorr/series.hpp"

#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

std::string to_string(Variable v) {
  switch (v) {
    case Variable::q: return "q";
    case Variable::t: return "t";
    case Variable::tau: return "tau";
    case Variable::u: return "u";
  }
  return "?";
}

std::string Prefactor::to_string(Variable v) const {
  if (lambda_coeff == 0 && h_coeff == 0) return "none";
  LinearForm f{0, lambda_coeff, h_coeff};
  return asymcorr::to_string(v) + "^(" + f.to_string() + ")";
}

LinearForm Slice::exponent(long k0) const {
  return {offset + step * k0, prefactor.lambda_coeff, prefactor.h_coeff};
}

LinearForm QSeries::exponent(long k0) const {
  return {offset + step * k0, prefactor.lambda_coeff, prefactor.h_coeff};
}

const Coefficient* QSeries::find(const SeriesKey& key) const {
  auto it = coeffs.find(key);
  return it == coeffs.end() ? nullptr : &it->second;
}

QSeries QSeries::restricted_to(const std::vector<int>& kbar) const {
  QSeries out = *this;
  out.coeffs.clear();
  for (const auto& [key, c] : coeffs)
    if (key.kbar == kbar) out.coeffs.emplace(key, c);
  return out;
}

bool QSeries::operator==(const QSeries& o) const {
  if (variable != o.variable || space != o.space || !(prefactor == o.prefactor) || offset != o.offset ||
      step != o.step)
    return false;
  auto covered = [](const QSeries& a, const QSeries& b) {
    for (const auto& [key, c] : a.coeffs) {
      const Coefficient* other = b.find(key);
      if (!other) {
        if (!c.value.is_zero()) return false;
        continue;
      }
      if (c.value != other->value) return false;
      if (c.inv_gamma.has_value() != other->inv_gamma.has_value()) return false;
      if (c.inv_gamma && !(c.inv_gamma->arg == other->inv_gamma->arg)) return false;
    }
    return true;
  };
  return covered(*this, o) && covered(o, *this);
}

namespace {

void check_trunc(const Truncation& trunc) {
  if (trunc.max_k0 < 1) fail(ErrorCode::TruncationTooSmall, "max k0 must be at least 1");
  if (trunc.max_kbar < 0) fail(ErrorCode::TruncationTooSmall, "max |k| must be nonnegative");
}

Rational kbar_factorial(const std::vector<int>& kbar) {
  Rational f = 1;
  for (int k : kbar) f *= factorial(k);
  return f;
}

// Sector carrying the term: element with multiplicities frac(k0*sign*q + a).
std::size_t term_sector(const GroupData& group, long k0, int sign, const std::vector<Rational>& a) {
  std::vector<Rational> m(group.input.n());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = group.input.weight(j) * (sign * k0) + a[j];
  return group.index_of_reduced(m);
}

std::size_t gbar_of(const GroupData& group, const std::vector<Rational>& a) {
  return group.coset_of[group.index_of_reduced(a)];
}

}  // namespace

std::vector<Rational> coset_multiplicities(const GroupData& group, std::size_t gbar) {
  return group.elements[gbar].multiplicities();
}

Slice x_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0) {
  const auto& in = group.input;
  Slice s;
  s.space = SpaceTag::X;
  s.variable = Variable::t;
  s.prefactor = {Rational(in.d), 0};
  s.offset = 0;
  s.step = 1;
  s.a = a;
  s.gbar = gbar_of(group, a);
  for (long k0 = 0; k0 <= max_k0; ++k0) {
    SliceTerm term;
    term.k0 = k0;
    term.sector = term_sector(group, k0, 1, a);
    term.factors = LinearFactorProduct(Rational(1) / factorial(k0));
    for (std::size_t j = 0; j < in.n(); ++j) {
      Rational y = in.weight(j) * k0 + a[j];
      LinearForm num{1 - frac(y), Rational(-in.c[j]), 0};
      LinearForm den{1 - y, Rational(-in.c[j]), 0};
      term.factors *= gamma_quotient(num, den);
    }
    if (!term.factors.is_zero()) s.terms.push_back(std::move(term));
  }
  return s;
}

Slice y_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0) {
  const auto& in = group.input;
  Slice s;
  s.space = SpaceTag::Y;
  s.variable = Variable::q;
  s.prefactor = {0, 1};
  s.offset = 0;
  s.step = make_rational(1, in.d);
  s.a = a;
  s.gbar = gbar_of(group, a);
  for (long k0 = 0; k0 <= max_k0; ++k0) {
    std::size_t sector = term_sector(group, k0, -1, a);
    if (group.elements[sector].fixed_count() == 0) continue;
    SliceTerm term;
    term.k0 = k0;
    term.sector = sector;
    Rational dd(in.d);
    term.factors = gamma_quotient({1, -dd, -dd}, {Rational(1 - k0), -dd, -dd});
    for (std::size_t j = 0; j < in.n(); ++j) {
      Rational x = a[j] - in.weight(j) * k0;
      Rational cj(in.c[j]);
      term.factors *= gamma_quotient({1 - frac(x), 0, cj}, {1 - x, 0, cj});
    }
    if (!term.factors.is_zero()) s.terms.push_back(std::move(term));
  }
  return s;
}

Slice fjrw_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0, AgeSignPolicy policy) {
  Slice x = x_slice(group, a, max_k0);
  Slice s;
  s.space = SpaceTag::FJRW;
  s.variable = Variable::t;
  s.offset = 0;
  s.step = 1;
  s.a = a;
  s.gbar = x.gbar;
  std::size_t jay_inv = group.inverse(group.jay);
  for (const auto& xt : x.terms) {
    if (group.elements[xt.sector].fixed_count() != 0) continue;
    std::size_t h = group.multiply(xt.sector, jay_inv);
    if (policy == AgeSignPolicy::Strict && !is_integer(age(group.elements[h])))
      fail(ErrorCode::NonIntegerAgeSign, "age of " + group.elements[h].label() + " is not an integer");
    LinearFactorProduct f = xt.factors;
    f.multiply(x.exponent(xt.k0));
    LinearFactorProduct lim = f.lambda_limit();
    if (lim.is_zero()) continue;
    s.terms.push_back({xt.k0, h, lim});
  }
  return s;
}

Slice z_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0) {
  const auto& in = group.input;
  Slice y = y_slice(group, a, max_k0);
  Slice s;
  s.space = SpaceTag::Z;
  s.variable = Variable::q;
  s.prefactor = {0, 1};
  s.offset = 0;
  s.step = y.step;
  s.a = a;
  s.gbar = y.gbar;
  Rational dd(in.d);
  for (const auto& yt : y.terms) {
    if (group.elements[yt.sector].fixed_count() < 2) continue;
    LinearFactorProduct f = yt.factors;
    if (yt.k0 % 2) f *= Rational(-1);
    f.multiply(y.exponent(yt.k0));
    f.divide({0, -dd, -dd});
    f *= -dd;
    LinearFactorProduct lim = f.lambda_limit();
    if (lim.is_zero()) continue;
    s.terms.push_back({yt.k0, yt.sector, lim});
  }
  return s;
}

QSeries series_from_slice(const Slice& slice, const GroupData& group, long max_k0) {
  QSeries out;
  out.variable = slice.variable;
  out.space = slice.space;
  out.basis = SectorBasis::make(group, slice.space);
  out.prefactor = slice.prefactor;
  out.offset = slice.offset;
  out.step = slice.step;
  out.trunc = {max_k0, 0};
  for (const auto& t : slice.terms) {
    if (t.k0 > max_k0) break;
    int nil = out.basis.nil(t.sector);
    if (nil == 0) continue;
    Coefficient c;
    c.value = CohomClass::on_sector(t.sector, t.factors.expand(nil));
    c.factored = t;
    out.coeffs[{t.k0, {}}] = std::move(c);
  }
  return out;
}

namespace {

template <typename SliceFn>
QSeries build_from_slices(const GroupData& group, const Truncation& trunc, SpaceTag tag, SliceFn fn) {
  check_trunc(trunc);
  QSeries out;
  out.space = tag;
  out.basis = SectorBasis::make(group, tag);
  out.trunc = trunc;
  bool first = true;
  for (const auto& kbar : multi_indices(group.gbar_generators.size(), trunc.max_kbar)) {
    Slice s = fn(weighted_multiplicities(group, kbar));
    if (first) {
      out.variable = s.variable;
      out.prefactor = s.prefactor;
      out.offset = s.offset;
      out.step = s.step;
      first = false;
    }
    Rational inv_kfact = Rational(1) / kbar_factorial(kbar);
    for (auto t : s.terms) {
      int nil = out.basis.nil(t.sector);
      if (nil == 0) continue;
      t.factors *= inv_kfact;
      Coefficient c;
      c.value = CohomClass::on_sector(t.sector, t.factors.expand(nil));
      c.factored = t;
      out.coeffs[{t.k0, kbar}] = std::move(c);
    }
  }
  return out;
}

}  // namespace

QSeries build_IX(const GroupData& group, const Truncation& trunc) {
  return build_from_slices(group, trunc, SpaceTag::X,
                           [&](const std::vector<Rational>& a) { return x_slice(group, a, trunc.max_k0); });
}

QSeries build_IY(const GroupData& group, const Truncation& trunc) {
  return build_from_slices(group, trunc, SpaceTag::Y,
                           [&](const std::vector<Rational>& a) { return y_slice(group, a, trunc.max_k0); });
}

QSeries build_IX_modification(const GroupData& group, const Truncation& trunc) {
  check_trunc(trunc);
  const auto& in = group.input;
  QSeries out;
  out.space = SpaceTag::X;
  out.variable = Variable::t;
  out.basis = SectorBasis::make(group, SpaceTag::X);
  out.prefactor = {Rational(in.d), 0};
  out.trunc = trunc;
  for (const auto& kbar : multi_indices(group.gbar_generators.size(), trunc.max_kbar)) {
    auto a = weighted_multiplicities(group, kbar);
    for (long k0 = 0; k0 <= trunc.max_k0; ++k0) {
      // M(k0, k) = prod_j prod_{0 <= b < y_j, frac(b) = frac(y_j)} (-c_j lambda - b)
      LambdaPoly m(Rational(1) / (factorial(k0) * kbar_factorial(kbar)));
      std::vector<Rational> y(in.n());
      for (std::size_t j = 0; j < in.n(); ++j) {
        y[j] = in.weight(j) * k0 + a[j];
        for (Rational b = frac(y[j]); b < y[j]; b += 1)
          m *= LambdaPoly::monomial(Rational(-in.c[j]), 1) + LambdaPoly(-b);
      }
      if (m.is_zero()) continue;
      std::size_t sector = group.index_of_reduced(y);
      Coefficient c;
      c.value = CohomClass::on_sector(sector, HPoly(1, m));
      out.coeffs[{k0, kbar}] = std::move(c);
    }
  }
  return out;
}

QSeries build_IY_product(const GroupData& group, const Truncation& trunc) {
  check_trunc(trunc);
  const auto& in = group.input;
  QSeries out;
  out.space = SpaceTag::Y;
  out.variable = Variable::q;
  out.basis = SectorBasis::make(group, SpaceTag::Y);
  out.prefactor = {0, 1};
  out.step = make_rational(1, in.d);
  out.trunc = trunc;
  for (const auto& kbar : multi_indices(group.gbar_generators.size(), trunc.max_kbar)) {
    auto a = weighted_multiplicities(group, kbar);
    for (long k0 = 0; k0 <= trunc.max_k0; ++k0) {
      std::vector<Rational> m(in.n());
      for (std::size_t j = 0; j < in.n(); ++j) m[j] = a[j] - in.weight(j) * k0;
      std::size_t sector = group.index_of_reduced(m);
      int nil = out.basis.nil(sector);
      if (nil == 0) continue;
      HPoly h(nil, LambdaPoly(Rational(1) / kbar_factorial(kbar)));
      HPoly H = HPoly::monomial(nil, 1);
      HPoly lam(nil, LambdaPoly::lambda());
      // prod_{l=0}^{k0-1} (-d(lambda + H) - l)
      for (long l = 0; l < k0; ++l) {
        HPoly f = (lam + H) * LambdaPoly(Rational(-in.d));
        f += HPoly(nil, LambdaPoly(Rational(-l)));
        h *= f;
      }
      // toric form: prod_{b <= 0} (c_j H + b) / prod_{b <= D_j} (c_j H + b), b = D_j mod 1
      for (std::size_t j = 0; j < in.n(); ++j) {
        Rational D = in.weight(j) * k0 - a[j];
        Rational cj(in.c[j]);
        if (D > 0) {
          for (Rational b = D; b > 0; b -= 1) h *= invert_form({b, 0, cj}, nil);
        } else {
          for (Rational b = D + 1; b <= 0; b += 1) h *= LinearForm{b, 0, cj}.to_hpoly(nil);
        }
      }
      if (h.is_zero()) continue;
      Coefficient c;
      c.value = CohomClass::on_sector(sector, h);
      out.coeffs[{k0, kbar}] = std::move(c);
    }
  }
  return out;
}

QSeries borel_regularize(const QSeries& s, const Rational& kappa, int sigma) {
  QSeries out = s;
  out.variable = Variable::tau;
  out.prefactor = {s.prefactor.lambda_coeff * kappa, s.prefactor.h_coeff * kappa};
  out.offset = s.offset * kappa;
  out.step = s.step * kappa;
  for (auto& [key, c] : out.coeffs) {
    LinearForm e = s.exponent(key.k0);
    if (sigma == -1) {
      long ei = to_long(e.constant);
      if (ei % 2) {
        c.value = -c.value;
        if (c.factored) c.factored->factors *= Rational(-1);
      }
    }
    c.inv_gamma = GammaFactor{(e * kappa) + Rational(1)};
  }
  return out;
}

QSeries regularize(const QSeries& ix, const GroupData& group) {
  if (ix.space != SpaceTag::X) fail(ErrorCode::VariableMismatch, "regularize expects an X-side series");
  return borel_regularize(ix, make_rational(group.r, group.input.d), 1);
}

QSeries mlk_transform(const QSeries& ix, const GroupData& group, AgeSignPolicy policy) {
  if (ix.space != SpaceTag::X) fail(ErrorCode::VariableMismatch, "MLK expects an X-side series");
  QSeries out;
  out.variable = Variable::t;
  out.space = SpaceTag::FJRW;
  out.basis = SectorBasis::make(group, SpaceTag::FJRW);
  out.trunc = ix.trunc;
  std::size_t jay_inv = group.inverse(group.jay);
  for (const auto& [key, c] : ix.coeffs) {
    for (const auto& [sector, hp] : c.value.parts()) {
      if (group.elements[sector].fixed_count() != 0) continue;
      std::size_t h = group.multiply(sector, jay_inv);
      if (policy == AgeSignPolicy::Strict && !is_integer(age(group.elements[h])))
        fail(ErrorCode::NonIntegerAgeSign, "age of " + group.elements[h].label() + " is not an integer");
      LinearForm e = ix.exponent(key.k0);
      LambdaPoly v = hp[0] * (LambdaPoly(e.constant) + LambdaPoly::monomial(e.lambda_slope, 1));
      Rational lim = v.at_zero();
      if (lim == 0) continue;
      out.coeffs[key].value += CohomClass::on_sector(h, HPoly(1, LambdaPoly(lim)));
    }
  }
  return out;
}

QSeries qsd_transform(const QSeries& iy, const GroupData& group) {
  if (iy.space != SpaceTag::Y) fail(ErrorCode::VariableMismatch, "QSD expects a Y-side series");
  const auto& in = group.input;
  Rational dd(in.d);
  QSeries out;
  out.variable = Variable::q;
  out.space = SpaceTag::Z;
  out.basis = SectorBasis::make(group, SpaceTag::Z);
  out.prefactor = iy.prefactor;
  out.offset = iy.offset;
  out.step = iy.step;
  out.trunc = iy.trunc;
  for (const auto& [key, c] : iy.coeffs) {
    if (!c.factored) fail(ErrorCode::LambdaLimitUndefined, "QSD needs factor-form coefficients");
    const SliceTerm& t = *c.factored;
    int nil = out.basis.nil(t.sector);
    if (nil == 0) continue;
    LinearFactorProduct f = t.factors;
    if (key.k0 % 2) f *= Rational(-1);
    f.multiply(iy.exponent(key.k0));
    f.divide({0, -dd, -dd});
    f *= -dd;
    LinearFactorProduct lim = f.lambda_limit();
    if (lim.is_zero()) continue;
    HPoly v = lim.expand(nil);
    if (v.is_zero()) continue;
    Coefficient oc;
    oc.value = CohomClass::on_sector(t.sector, v);
    oc.factored = SliceTerm{t.k0, t.sector, lim};
    out.coeffs[key] = std::move(oc);
  }
  return out;
}

QSeries qsd_transform_laurent(const QSeries& iy, const GroupData& group) {
  if (iy.space != SpaceTag::Y) fail(ErrorCode::VariableMismatch, "QSD expects a Y-side series");
  Rational dd(group.input.d);
  QSeries out;
  out.variable = Variable::q;
  out.space = SpaceTag::Z;
  out.basis = SectorBasis::make(group, SpaceTag::Z);
  out.prefactor = iy.prefactor;
  out.offset = iy.offset;
  out.step = iy.step;
  out.trunc = iy.trunc;
  for (const auto& [key, c] : iy.coeffs) {
    if (key.k0 == 0) continue;
    CohomClass acc;
    for (const auto& [sector, hp] : c.value.parts()) {
      int nil_z = out.basis.nil(sector);
      if (nil_z == 0) continue;
      int nil = hp.nil();
      HPoly v = hp * iy.exponent(key.k0).to_hpoly(nil);
      v *= invert_form({0, -dd, -dd}, nil);
      v *= LambdaPoly(key.k0 % 2 ? dd : -dd);
      HPoly lim(nil_z);
      for (int p = 0; p < nil_z; ++p) lim[p] = LambdaPoly(v[p].at_zero());
      acc += CohomClass::on_sector(sector, lim);
    }
    if (acc.is_zero()) continue;
    out.coeffs[key].value = acc;
  }
  return out;
}

}  // namespace asymcorr
