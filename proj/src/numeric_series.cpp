#include "asymcorr/numeric_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asymcorr/errors.hpp"

namespace asymcorr {

std::size_t SeriesModel::component_index(const BasisEntry& e) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i] == e) return i;
  return components.size();
}

ThetaOperator slice_operator(const GroupData& group, SpaceTag space, std::size_t gbar) {
  auto a = coset_multiplicities(group, gbar);
  switch (space) {
    case SpaceTag::X:
      return build_pf_X(group, a);
    case SpaceTag::Y:
      return build_pf_Y(group, a);
    case SpaceTag::FJRW:
      return factor_pf(build_D_t(group, gbar), group, gbar).irr;
    case SpaceTag::Z: {
      ThetaOperator irr = factor_pf(build_D_t(group, gbar), group, gbar).irr;
      return change_variable(irr, Variable::q, make_rational(-1, group.input.d), -1);
    }
  }
  fail(ErrorCode::InvalidInput, "unknown space");
}

long resonance_bound(const ThetaOperator& op, const Rational& offset, const Rational& step,
                     const Rational& lambda_coeff, long scan) {
  if (op.is_zero()) fail(ErrorCode::InvalidInput, "zero operator");
  const ThetaPoly& p0 = op.terms().begin()->second;
  long last = -1;
  for (long k0 = 0; k0 <= scan; ++k0) {
    LinearForm e{offset + step * k0, lambda_coeff, 0};
    if (p0.evaluate(e, 1)[0].is_zero()) last = k0;
  }
  return last;
}

namespace {

Slice build_slice(const GroupData& group, SpaceTag space, const std::vector<Rational>& a, long max_k0) {
  switch (space) {
    case SpaceTag::X:
      return x_slice(group, a, max_k0);
    case SpaceTag::Y:
      return y_slice(group, a, max_k0);
    case SpaceTag::FJRW:
      return fjrw_slice(group, a, max_k0);
    case SpaceTag::Z:
      return z_slice(group, a, max_k0);
  }
  fail(ErrorCode::InvalidInput, "unknown space");
}

ThetaOperator normalized(const ThetaOperator& op) { return op.left_shift(-op.min_power()); }

long scan_length(const GroupData& group) { return 40L * group.input.d + 80; }

}  // namespace

std::shared_ptr<const SeriesModel> series_model(const GroupData& group, SpaceTag space, std::size_t gbar,
                                                const ComplexRational& lambda) {
  auto m = std::make_shared<SeriesModel>();
  m->space = space;
  m->gbar = gbar;
  m->lambda = lambda;
  auto a = coset_multiplicities(group, gbar);
  Slice probe = build_slice(group, space, a, 0);
  m->variable = probe.variable;
  m->offset = probe.offset;
  m->step = probe.step;
  m->lambda_coeff = probe.prefactor.lambda_coeff;
  m->h_coeff = probe.prefactor.h_coeff;
  m->op = normalized(slice_operator(group, space, gbar));
  long bound = resonance_bound(m->op, m->offset, m->step, m->lambda_coeff, scan_length(group));
  m->head_max_k0 = std::max(bound, 0L);
  m->head = build_slice(group, space, a, m->head_max_k0).terms;
  SectorBasis basis = SectorBasis::make(group, space);
  m->components = basis.block(group, gbar);
  for (const auto& e : m->components) m->nil[e.sector] = basis.nil(e.sector);
  for (const auto& t : m->head)
    if (!m->nil.count(t.sector)) m->nil[t.sector] = basis.nil(t.sector);
  return m;
}

std::shared_ptr<const SeriesModel> borel_model(const std::shared_ptr<const SeriesModel>& base,
                                               const Rational& kappa, int sigma) {
  if (kappa <= 0) fail(ErrorCode::InvalidInput, "kappa must be positive");
  if (sigma == -1 && (base->lambda_coeff != 0 || base->h_coeff != 0 || !is_integer(base->offset) ||
                      !is_integer(base->step)))
    fail(ErrorCode::VariableMismatch, "a sign twist needs integer exponents");
  auto m = std::make_shared<SeriesModel>(*base);
  m->base = base;
  m->kappa = kappa;
  m->sigma = sigma;
  m->variable = Variable::tau;
  m->offset = kappa * base->offset;
  m->step = kappa * base->step;
  m->lambda_coeff = kappa * base->lambda_coeff;
  m->h_coeff = kappa * base->h_coeff;
  m->head.clear();
  m->op = normalized(borel_ode(base->op, kappa, sigma));
  long scan = 40L * std::max<long>(1, to_long(Rational(1) / m->step) + 1) + 200;
  long bound = resonance_bound(m->op, m->offset, m->step, m->lambda_coeff, scan);
  m->head_max_k0 = std::max(bound, base->head_max_k0);
  return m;
}

Complex lambda_value(const ComplexRational& lambda) { return Complex(lambda); }

namespace {

Complex lambda_poly_value(const LambdaPoly& p, const Complex& lam) {
  Complex s;
  for (const auto& [e, c] : p.terms()) s += pow(lam, static_cast<long>(e)) * Real(c);
  return s;
}

}  // namespace

NumericOperator NumericOperator::make(const ThetaOperator& op, const ComplexRational& lambda) {
  NumericOperator n;
  Complex lam = lambda_value(lambda);
  n.order = op.order();
  for (const auto& [a, p] : op.terms()) {
    std::vector<Complex> c;
    for (int i = 0; i <= p.degree(); ++i) c.push_back(lambda_poly_value(p.coefficient(i), lam));
    n.terms.emplace_back(a, std::move(c));
  }
  return n;
}

Jet NumericOperator::evaluate(std::size_t i, const Jet& e) const {
  const auto& c = terms[i].second;
  Jet r(e.size());
  for (std::size_t j = c.size(); j-- > 0;) {
    r *= e;
    if (e.size() > 0) r[0] += c[j];
  }
  return r;
}

NumericSeries::NumericSeries(std::shared_ptr<const SeriesModel> model, mpfr_prec_t bits)
    : model_(std::move(model)), bits_(bits) {
  PrecisionScope scope(bits_);
  op_ = NumericOperator::make(model_->op, model_->lambda);
  mu_ = lambda_value(model_->lambda) * Real(model_->lambda_coeff);
  for (const auto& [a, p] : model_->op.terms()) {
    Rational s = a / model_->step;
    if (!is_integer(s)) fail(ErrorCode::VariableMismatch, "operator power is not a multiple of the step");
    shifts_.push_back(to_long(s));
  }
  if (model_->is_borel()) base_ = std::make_unique<NumericSeries>(model_->base, bits_);
}

Jet NumericSeries::exponent(long k0, int n) const {
  Complex c = Complex(model_->offset + model_->step * k0) + mu_;
  return Jet::linear(n, c, Complex(Real(model_->h_coeff)));
}

Jet NumericSeries::head_coefficient(const SliceTerm& t) const {
  int n = model_->nil.at(t.sector);
  Complex lam = lambda_value(model_->lambda);
  auto form_jet = [&](const LinearForm& f) {
    return Jet::linear(n, Complex(f.constant) + lam * Real(f.lambda_slope), Complex(Real(f.h_slope)));
  };
  Jet out(n, Complex(t.factors.scalar()));
  for (const auto& f : t.factors.numer()) out *= form_jet(f);
  for (const auto& f : t.factors.denom()) {
    Jet j = form_jet(f);
    if (mag(j[0]).log2_abs() < -static_cast<double>(bits_) / 2)
      fail(ErrorCode::ResonantLambda, "vanishing denominator at this lambda");
    out *= j.inverse();
  }
  return out;
}

void NumericSeries::extend_to(long k) {
  if (k <= computed_) return;
  PrecisionScope scope(bits_);
  const SeriesModel& m = *model_;
  std::map<long, const SliceTerm*> head;
  if (!m.is_borel())
    for (const auto& t : m.head) head[t.k0] = &t;
  for (long k0 = computed_ + 1; k0 <= k; ++k0) {
    NumericTerm term;
    term.k0 = k0;
    bool present = false;
    if (k0 <= m.head_max_k0) {
      if (m.is_borel()) {
        const NumericTerm* b = base_->term(k0);
        if (b) {
          term.sector = b->sector;
          int n = b->c.size();
          Jet e = exponent(k0, n);
          Jet g = rgamma_jet(Complex(1) + e[0], n).scaled(Complex(Real(m.h_coeff)));
          term.c = b->c * g;
          if (m.sigma == -1) {
            Rational eb = m.base->offset + m.base->step * k0;
            if (to_long(eb) % 2 != 0) term.c = -term.c;
          }
          present = true;
        }
      } else {
        auto it = head.find(k0);
        if (it != head.end() && m.nil.at(it->second->sector) > 0) {
          term.sector = it->second->sector;
          term.c = head_coefficient(*it->second);
          present = true;
        }
      }
    } else {
      // P_0(E_k) c_k = -sum_{i>0} P_i(E_{k - s_i}) c_{k - s_i}
      Jet sum;
      for (std::size_t i = 1; i < shifts_.size(); ++i) {
        auto it = index_.find(k0 - shifts_[i]);
        if (it == index_.end()) continue;
        const NumericTerm& prev = terms_[it->second];
        if (!present) {
          present = true;
          term.sector = prev.sector;
          sum = Jet(prev.c.size());
        } else if (prev.sector != term.sector) {
          fail(ErrorCode::VariableMismatch, "recursion mixes sectors");
        }
        sum += op_.evaluate(i, exponent(prev.k0, prev.c.size())) * prev.c;
      }
      if (present) {
        Jet p0 = op_.evaluate(0, exponent(k0, sum.size()));
        Real scale = max(p0.mag(), Real(1));
        if ((mag(p0[0]) / scale).log2_abs() < -static_cast<double>(bits_) / 2)
          fail(ErrorCode::ResonantLambda, "resonant recursion at k0 = " + std::to_string(k0));
        term.c = -(p0.inverse() * sum);
      }
    }
    if (present) {
      index_[k0] = terms_.size();
      terms_.push_back(std::move(term));
    }
  }
  computed_ = k;
}

const std::vector<NumericTerm>& NumericSeries::terms_through(long k) {
  extend_to(k);
  return terms_;
}

const NumericTerm* NumericSeries::term(long k0) {
  extend_to(k0);
  auto it = index_.find(k0);
  return it == index_.end() ? nullptr : &terms_[it->second];
}

namespace {

constexpr long kChunk = 64;
constexpr long kMaxTerms = 400000;

}  // namespace

std::vector<std::vector<Complex>> NumericSeries::evaluate(const Complex& logv, int m) {
  PrecisionScope scope(bits_);
  const SeriesModel& md = *model_;
  Complex w = exp(logv * Complex(Real(md.step)));
  Complex power = exp(logv * Complex(Real(md.offset)));
  long power_k0 = 0;
  std::map<std::size_t, std::vector<Jet>> acc;
  Real largest;
  double eps = -static_cast<double>(bits_) - 12.0;
  long window = 4 * (shifts_.empty() ? 1 : *std::max_element(shifts_.begin(), shifts_.end())) + 8;
  long last_big = 0;
  std::size_t next = 0;
  for (long k = kChunk;; k += kChunk) {
    if (k > kMaxTerms) fail(ErrorCode::PrecisionExhausted, "series did not converge at this point");
    extend_to(k);
    bool done = false;
    for (; next < terms_.size(); ++next) {
      const NumericTerm& t = terms_[next];
      if (t.k0 > k) break;
      power *= pow(w, t.k0 - power_k0);
      power_k0 = t.k0;
      int n = t.c.size();
      auto& slot = acc[t.sector];
      if (slot.empty()) slot.assign(static_cast<std::size_t>(m), Jet(n));
      Jet v = t.c * power;
      Real size = v.mag();
      if (m > 1) {
        Jet e = exponent(t.k0, n);
        Real scale = max(mag(e[0]), Real(1));
        for (int i = 1; i < m; ++i) size *= scale;
        for (int i = 0; i < m; ++i) {
          slot[static_cast<std::size_t>(i)] += v;
          if (i + 1 < m) v = e * v;
        }
      } else {
        slot[0] += v;
      }
      if (size > largest) largest = size;
      if (largest.is_zero() || size.log2_abs() - largest.log2_abs() > eps) last_big = t.k0;
    }
    if (k > md.head_max_k0 && k - last_big > window) done = true;
    if (done) break;
  }
  std::vector<std::vector<Complex>> out(static_cast<std::size_t>(m), std::vector<Complex>(md.components.size()));
  for (auto& [sector, slots] : acc) {
    int n = slots.front().size();
    Jet pref = Jet::linear(n, mu_ * logv, logv * Complex(Real(md.h_coeff))).exp();
    for (int i = 0; i < m; ++i) {
      Jet v = pref * slots[static_cast<std::size_t>(i)];
      for (int b = 0; b < n; ++b) {
        std::size_t idx = md.component_index({sector, b});
        if (idx < md.components.size()) out[static_cast<std::size_t>(i)][idx] = v[b];
      }
    }
  }
  return out;
}

std::vector<std::pair<long, std::vector<Complex>>> NumericSeries::term_values(const Complex& logv, long kmax) {
  PrecisionScope scope(bits_);
  const SeriesModel& md = *model_;
  extend_to(kmax);
  Complex w = exp(logv * Complex(Real(md.step)));
  Complex power = exp(logv * Complex(Real(md.offset)));
  long power_k0 = 0;
  std::vector<std::pair<long, std::vector<Complex>>> out;
  std::map<std::size_t, Jet> prefs;
  for (const auto& t : terms_) {
    if (t.k0 > kmax) break;
    power *= pow(w, t.k0 - power_k0);
    power_k0 = t.k0;
    int n = t.c.size();
    auto it = prefs.find(t.sector);
    if (it == prefs.end())
      it = prefs.emplace(t.sector, Jet::linear(n, mu_ * logv, logv * Complex(Real(md.h_coeff))).exp()).first;
    Jet v = it->second * (t.c * power);
    std::vector<Complex> comp(md.components.size());
    for (int b = 0; b < n; ++b) {
      std::size_t idx = md.component_index({t.sector, b});
      if (idx < comp.size()) comp[idx] = v[b];
    }
    out.emplace_back(t.k0, std::move(comp));
  }
  return out;
}

double NumericSeries::log2_max_term(const Complex& logv, long max_terms) {
  PrecisionScope scope(bits_);
  const SeriesModel& md = *model_;
  Real lw = (logv * Complex(Real(md.step))).re();
  Real lo = (logv * Complex(Real(md.offset))).re();
  double best = -std::numeric_limits<double>::infinity();
  long last_big = 0;
  long window = 4 * (shifts_.empty() ? 1 : *std::max_element(shifts_.begin(), shifts_.end())) + 8;
  double lw2 = lw.to_double() / std::log(2.0), lo2 = lo.to_double() / std::log(2.0);
  std::size_t next = 0;
  for (long k = kChunk; k <= max_terms; k += kChunk) {
    extend_to(k);
    for (; next < terms_.size(); ++next) {
      const NumericTerm& t = terms_[next];
      if (t.k0 > k) break;
      double s = t.c.mag().log2_abs() + lo2 + lw2 * static_cast<double>(t.k0);
      if (s > best) best = s;
      if (s > best - 64.0 - static_cast<double>(bits_)) last_big = t.k0;
    }
    if (k > md.head_max_k0 && k - last_big > window) return best;
  }
  fail(ErrorCode::PrecisionExhausted, "series did not converge at this point");
}

std::vector<std::vector<Complex>> evaluate_convergent(const std::shared_ptr<const SeriesModel>& model,
                                                      const std::function<Complex()>& logv, int m,
                                                      mpfr_prec_t bits) {
  auto at = [&](mpfr_prec_t b) {
    PrecisionScope scope(b);
    return logv();
  };
  double top;
  {
    NumericSeries probe(model, 96);
    top = probe.log2_max_term(at(96));
  }
  mpfr_prec_t extra = static_cast<mpfr_prec_t>(std::max(0.0, top)) + 48;
  NumericSeries s(model, bits + extra);
  auto out = s.evaluate(at(bits + extra), m);
  Real big;
  for (const auto& row : out)
    for (const auto& z : row) big = max(big, mag(z));
  double loss = top - big.log2_abs();
  if (loss + 32 > static_cast<double>(extra)) {
    mpfr_prec_t b = bits + static_cast<mpfr_prec_t>(loss) + 64;
    NumericSeries again(model, b);
    out = again.evaluate(at(b), m);
  }
  return out;
}

}  // namespace asymcorr
