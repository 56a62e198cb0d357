#include "asymcorr/borel_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

namespace {

Real pow10_neg(double digits) {
  Real r(-digits);
  mpfr_exp10(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real vec_mag(const std::vector<Complex>& v) {
  Real m;
  for (const auto& z : v) m = max(m, mag(z));
  return m;
}

}  // namespace

PrecisionContext PrecisionContext::with_digits(int digits) {
  PrecisionContext c;
  c.digits = digits;
  c.ode_local_digits = digits - 5;
  c.quad_digits = digits - 10;
  c.match_digits = digits / 2.0;
  c.validate();
  return c;
}

void PrecisionContext::validate() const {
  if (digits < 30) fail(ErrorCode::ConfigError, "digits must be at least 30");
  if (!(match_digits <= quad_digits && quad_digits <= ode_local_digits))
    fail(ErrorCode::ConfigError, "tolerances must satisfy match >= quad >= ode_local");
  if (ode_local_digits > digits) fail(ErrorCode::ConfigError, "ode_local finer than the working precision");
}

Real PrecisionContext::ode_local() const { return pow10_neg(ode_local_digits); }
Real PrecisionContext::quad() const { return pow10_neg(quad_digits); }
Real PrecisionContext::match() const { return pow10_neg(match_digits); }

Complex UPoint::value() const { return Complex::polar(Real(modulus), Real(arg)); }
Complex UPoint::log() const { return {asymcorr::log(Real(modulus)), Real(arg)}; }
std::string UPoint::to_string() const {
  return asymcorr::to_string(modulus) + "*exp(i*" + asymcorr::to_string(arg) + ")";
}

bool WatsonRegion::contains(const Rational& arg) const {
  double a = arg.get_d();
  return a > lo && a < hi;
}

WatsonRegion watson_region(const GroupData& group) {
  double r = std::fabs(static_cast<double>(group.r));
  if (r == 0) fail(ErrorCode::CrepantInput, "no asymptotic region for r = 0");
  const double pi = std::numbers::pi;
  WatsonRegion w;
  if (group.input.sum_c() % 2 == 1) {
    w.hi = std::min(pi / r, pi / 2);
    w.lo = -w.hi;
  } else {
    w.lo = 0;
    w.hi = std::min(2 * pi / r, pi / 2);
  }
  return w;
}

// ---------------------------------------------------------------- continuation

namespace {

long stirling2(int n, int k) {
  std::vector<std::vector<long>> s(static_cast<std::size_t>(n + 1), std::vector<long>(static_cast<std::size_t>(n + 1)));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j)
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          j * s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] +
          s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  return s[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

// Coefficients of prod_{l<n} (x - l).
std::vector<long> falling_coefficients(int n) {
  std::vector<long> c{1};
  for (int l = 0; l < n; ++l) {
    std::vector<long> d(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      d[i + 1] += c[i];
      d[i] -= l * c[i];
    }
    c = d;
  }
  return c;
}

Real falling(long n, int k) {
  Real r(1);
  for (int i = 0; i < k; ++i) r *= Real(n - i);
  return r;
}

Real factorial_real(int n) {
  Real r(1);
  for (int i = 2; i <= n; ++i) r *= Real(i);
  return r;
}

long binom(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BorelSum::BorelSum(std::shared_ptr<const SeriesModel> model, const RaySpec& ray, const PrecisionContext& ctx,
                   double step_fraction)
    : model_(std::move(model)),
      ray_(ray),
      ctx_(ctx),
      step_fraction_(step_fraction),
      bits_(ctx.bits()),
      series_(model_, ctx.bits()) {
  ctx_.validate();
  if (!(step_fraction > 0 && step_fraction <= 0.5))
    fail(ErrorCode::InvalidInput, "step fraction must lie in (0, 1/2]");
  PrecisionScope scope(bits_);
  NumericOperator op = NumericOperator::make(model_->op, model_->lambda);
  order_ = op.order;
  if (order_ < 1) fail(ErrorCode::InvalidInput, "operator of order zero");
  long top = 0;
  for (const auto& [a, c] : op.terms) {
    if (!is_integer(a) || a < 0) fail(ErrorCode::VariableMismatch, "Borel ODE needs integer powers");
    top = std::max(top, to_long(a));
  }
  // theta^i = sum_k S(i,k) tau^k (d/dtau)^k
  p_.assign(static_cast<std::size_t>(order_ + 1), std::vector<Complex>(static_cast<std::size_t>(top + order_ + 1)));
  for (const auto& [a, c] : op.terms) {
    long ai = to_long(a);
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
      for (int k = 0; k <= i; ++k) {
        long s = stirling2(i, k);
        if (s == 0) continue;
        p_[static_cast<std::size_t>(k)][static_cast<std::size_t>(ai + k)] += c[static_cast<std::size_t>(i)] * Real(s);
      }
  }
  SingularLocus loc = singular_locus(model_->op);
  if (loc.power > 0) {
    Complex v(loc.value);
    Real modulus = exp(log(abs(v)) / Real(loc.power));
    Real base = arg(v);
    for (long j = 0; j < loc.power; ++j)
      singular_.push_back(Complex::polar(modulus, (base + Real(2 * j) * pi()) / Real(loc.power)));
  }
  angle_ = Real(ray_.angle);
  direction_ = Complex::polar(Real(1), angle_);
  // Distance from each singular point to the ray.
  Real nearest;
  bool have = false;
  for (const auto& s : singular_) {
    Real diff = arg(s * direction_.conj());
    Real r = abs(s);
    Real d = abs(diff) >= ldexp(pi(), -1) ? r : r * abs(sin(diff));
    if (d <= r * Real(1e-3))
      fail(ErrorCode::SingularityTooClose, "ray at angle " + to_string(ray_.angle) + " passes a singular point");
    if (!have || r < nearest) nearest = r;
    have = true;
  }
  radius_ = have ? nearest : Real(1e30);
  rho1_ = have ? ldexp(nearest, -8) : ldexp(Real(1), -8);
  auto theta = series_.evaluate(Complex(log(rho1_), angle_), order_);
  std::size_t dim = model_->components.size();
  std::vector<std::vector<Complex>> derivs(dim, std::vector<Complex>(static_cast<std::size_t>(order_)));
  Complex tau = tau_at(rho1_);
  for (int n = 0; n < order_; ++n) {
    auto fc = falling_coefficients(n);
    Complex scale = pow(inverse(tau), n);
    for (std::size_t c = 0; c < dim; ++c) {
      Complex s;
      for (int i = 0; i <= n; ++i)
        if (fc[static_cast<std::size_t>(i)] != 0)
          s += theta[static_cast<std::size_t>(i)][c] * Real(fc[static_cast<std::size_t>(i)]);
      derivs[c][static_cast<std::size_t>(n)] = s * scale;
    }
  }
  build_center(rho1_, derivs);
}

Complex BorelSum::tau_at(const Real& rho) const { return direction_ * rho; }

Real BorelSum::distance_to_singularity(const Complex& tau) const {
  Real d = abs(tau);
  for (const auto& s : singular_) d = std::min(d, abs(tau - s));
  return d;
}

void BorelSum::build_center(const Real& rho, const std::vector<std::vector<Complex>>& derivs) {
  PrecisionScope scope(bits_);
  Center c;
  c.rho = rho;
  Complex tau = tau_at(rho);
  c.h = distance_to_singularity(tau) * Real(step_fraction_);
  int m = order_;
  // pi[k][j]: coefficient of delta^j in p_k(tau + delta)
  std::vector<std::vector<Complex>> pic(static_cast<std::size_t>(m + 1));
  for (int k = 0; k <= m; ++k) {
    const auto& pk = p_[static_cast<std::size_t>(k)];
    long deg = static_cast<long>(pk.size()) - 1;
    while (deg >= 0 && pk[static_cast<std::size_t>(deg)].is_zero()) --deg;
    std::vector<Complex> shifted(static_cast<std::size_t>(std::max(deg + 1, 0L)));
    std::vector<Complex> tpow{Complex(1)};
    for (long e = 1; e <= deg; ++e) tpow.push_back(tpow.back() * tau);
    for (long j = 0; j <= deg; ++j)
      for (long e = j; e <= deg; ++e)
        if (!pk[static_cast<std::size_t>(e)].is_zero())
          shifted[static_cast<std::size_t>(j)] +=
              pk[static_cast<std::size_t>(e)] * tpow[static_cast<std::size_t>(e - j)] * Real(binom(e, j));
    pic[static_cast<std::size_t>(k)] = std::move(shifted);
  }
  if (pic[static_cast<std::size_t>(m)].empty() || pic[static_cast<std::size_t>(m)][0].is_zero())
    fail(ErrorCode::SingularityTooClose, "center on a singular point");
  Complex lead_inv = inverse(pic[static_cast<std::size_t>(m)][0]);
  std::size_t dim = derivs.size();
  c.y.assign(dim, {});
  for (std::size_t comp = 0; comp < dim; ++comp)
    for (int n = 0; n < m; ++n)
      c.y[comp].push_back(derivs[comp][static_cast<std::size_t>(n)] * (Real(1) / factorial_real(n)));
  Real tol = ctx_.ode_local() * Real(1.0 / 16);
  Real biggest;
  Real hpow(1);
  for (int n = 0; n < m; ++n) {
    for (std::size_t comp = 0; comp < dim; ++comp) biggest = max(biggest, mag(c.y[comp][static_cast<std::size_t>(n)]) * hpow);
    hpow *= c.h;
  }
  int quiet = 0;
  long max_n = 60L * ctx_.digits + 200;
  for (long N = 0;; ++N) {
    long target = N + m;
    if (target > max_n) fail(ErrorCode::PrecisionExhausted, "Taylor series at a center did not converge");
    Real denom = falling(target, m);
    Real size;
    for (std::size_t comp = 0; comp < dim; ++comp) {
      const auto& y = c.y[comp];
      Complex s;
      for (int k = 0; k <= m; ++k) {
        const auto& pk = pic[static_cast<std::size_t>(k)];
        for (long j = 0; j < static_cast<long>(pk.size()) && j <= N; ++j) {
          if (k == m && j == 0) continue;
          if (pk[static_cast<std::size_t>(j)].is_zero()) continue;
          long idx = N - j + k;
          s.add_product(pk[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(idx)] * falling(idx, k));
        }
      }
      Complex next = -(s * lead_inv) * (Real(1) / denom);
      size = max(size, mag(next) * hpow);
      c.y[comp].push_back(std::move(next));
    }
    biggest = max(biggest, size);
    hpow *= c.h;
    if (size <= tol * biggest) {
      if (++quiet >= 6) break;
    } else {
      quiet = 0;
    }
  }
  centers_.push_back(std::move(c));
}

void BorelSum::extend(const Real& rho) {
  PrecisionScope scope(bits_);
  while (centers_.back().rho + centers_.back().h < rho) {
    const Center& c = centers_.back();
    Complex delta = direction_ * c.h;
    std::size_t dim = c.y.size();
    std::vector<std::vector<Complex>> derivs(dim, std::vector<Complex>(static_cast<std::size_t>(order_)));
    for (std::size_t comp = 0; comp < dim; ++comp) {
      const auto& y = c.y[comp];
      for (int i = 0; i < order_; ++i) {
        // f^{(i)}(c + delta) = sum_n y_n n!/(n-i)! delta^{n-i}
        Complex s;
        for (std::size_t n = y.size(); n-- > static_cast<std::size_t>(i);) {
          s *= delta;
          s += y[n] * falling(static_cast<long>(n), i);
        }
        derivs[comp][static_cast<std::size_t>(i)] = s;
      }
    }
    Real next = c.rho + c.h;
    build_center(next, derivs);
  }
}

std::vector<Complex> BorelSum::series_value(const Complex& tau) {
  PrecisionScope scope(bits_);
  return series_.evaluate(log(tau), 1)[0];
}

std::vector<Complex> BorelSum::value(const Real& rho) {
  PrecisionScope scope(bits_);
  if (rho <= rho1_) {
    if (rho.is_zero()) return std::vector<Complex>(dimension());
    return series_.evaluate(Complex(log(rho), angle_), 1)[0];
  }
  extend(rho);
  auto it = std::upper_bound(centers_.begin(), centers_.end(), rho,
                             [](const Real& r, const Center& c) { return r < c.rho; });
  const Center& c = *(it - 1);
  Complex delta = direction_ * (rho - c.rho);
  std::vector<Complex> out;
  for (const auto& y : c.y) {
    Complex s;
    for (std::size_t n = y.size(); n-- > 0;) {
      s *= delta;
      s += y[n];
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Complex> continue_regularized(BorelSum& sum, const Complex& tau) {
  PrecisionScope scope(sum.context().bits());
  Real r = abs(tau);
  Real diff = abs(arg(tau) - Real(sum.ray().angle));
  if (diff.log2_abs() < -static_cast<double>(sum.context().bits()) / 2 || r.is_zero()) return sum.value(r);
  if (r < sum.convergence_radius() * Real(0.9)) return sum.series_value(tau);
  fail(ErrorCode::RegionViolation, "point is neither on the ray nor inside the disk");
}

// ---------------------------------------------------------------- quadrature

namespace {

struct Rule {
  std::vector<Real> x;
  std::vector<Real> w;
};

const Rule& gauss_legendre(int n, mpfr_prec_t bits) {
  static std::mutex mu;
  static std::map<std::pair<int, mpfr_prec_t>, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, bits);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PrecisionScope scope(bits);
  Rule r;
  Real eps = ldexp(Real(1), -static_cast<long>(bits) + 6);
  for (int i = 0; i < n; ++i) {
    Real x(std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)));
    Real dp;
    for (int iter = 0; iter < 200; ++iter) {
      Real p0(1), p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - Real(1));
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= eps) break;
    }
    // Recompute the derivative at the converged node.
    Real p0(1), p1 = x;
    for (int k = 2; k <= n; ++k) {
      Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = Real(n) * (x * p1 - p0) / (x * x - Real(1));
    r.w.push_back(Real(2) / ((Real(1) - x * x) * dp * dp));
    r.x.push_back(std::move(x));
  }
  return cache.emplace(key, std::move(r)).first->second;
}

using Moments = std::vector<std::vector<Complex>>;  // [j][component]

Moments zero_moments(int m, std::size_t dim) {
  return Moments(static_cast<std::size_t>(m), std::vector<Complex>(dim));
}

void add_moments(Moments& a, const Moments& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t c = 0; c < a[j].size(); ++c) a[j][c] += b[j][c];
}

Real moments_diff(const Moments& a, const Moments& b) {
  Real d;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t c = 0; c < a[j].size(); ++c) d = max(d, mag(a[j][c] - b[j][c]));
  return d;
}

Real moments_mag(const Moments& a) {
  Real d;
  for (const auto& row : a) d = max(d, vec_mag(row));
  return d;
}

}  // namespace

BorelSum::Sample BorelSum::laplace(const UPoint& u, int m, double panel_scale) {
  PrecisionScope scope(bits_);
  if (m < 1) fail(ErrorCode::InvalidInput, "need at least one power of theta");
  if (!ray_.region.contains(u.arg))
    fail(ErrorCode::RegionViolation, "arg u = " + to_string(u.arg) + " is outside the asymptotic region");
  Real theta = Real(u.arg) + angle_;
  Real ct = cos(theta);
  if (ct <= Real(1e-6)) fail(ErrorCode::TailNotConvergent, "e^{-u tau} does not decay along the ray");
  int pieces = 1;
  while (pieces * panel_scale < 0.999) pieces *= 2;
  if (std::fabs(pieces * panel_scale - 1.0) > 1e-9) fail(ErrorCode::InvalidInput, "panel scale must be 2^-k");
  Complex rot = Complex::polar(Real(1), theta);
  Real umod(u.modulus);
  std::size_t dim = dimension();
  Real quad_tol = ctx_.quad() * Real(0.01);
  Real round = ldexp(Real(1), -static_cast<long>(bits_) + 8);

  auto integrand_at = [&](const Real& x, const Real& w, Moments& acc, Real& absacc) {
    auto b = value(x / umod);
    Complex s = rot * x;
    Complex f = exp(-s) * rot * w;
    for (int j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < dim; ++c) acc[static_cast<std::size_t>(j)][c].add_product(f, b[c]);
      absacc = max(absacc, mag(f) * vec_mag(b));
      f *= s;
    }
  };

  auto gauss_panel = [&](const Real& a, const Real& b, int n, Real& absacc) {
    const Rule& r = gauss_legendre(n, bits_);
    Moments acc = zero_moments(m, dim);
    Real half = ldexp(b - a, -1), mid = ldexp(a + b, -1);
    for (std::size_t i = 0; i < r.x.size(); ++i) integrand_at(mid + half * r.x[i], half * r.w[i], acc, absacc);
    return acc;
  };

  // Tanh-sinh on [0, x1]; level l has step 2^-l.
  auto tanh_sinh = [&](const Real& x1, Real& err, Real& absacc) {
    Real pih = ldexp(pi(), -1);
    double tmax = std::asinh((2.0 / std::numbers::pi) * (static_cast<double>(bits_) + 40) * std::log(2.0) / 2.0) + 0.5;
    auto node_sum = [&](const Real& h, long start, long stride, Moments& acc) {
      for (long k = start;; k += stride) {
        bool any = false;
        for (int sgn : {1, -1}) {
          if (k == 0 && sgn == -1) continue;
          Real t = h * Real(sgn * k);
          if (std::fabs(t.to_double()) > tmax) continue;
          any = true;
          Real sh = ldexp(exp(t) - exp(-t), -1), ch = ldexp(exp(t) + exp(-t), -1);
          Real v = pih * sh;
          Real e2 = exp(-ldexp(v, 1));
          Real x = x1 / (Real(1) + e2);
          Real cv = ldexp(exp(v) + exp(-v), -1);
          Real w = x1 * ldexp(pih, -1) * ch / (cv * cv) * h;
          if (x.is_zero()) continue;
          integrand_at(x, w, acc, absacc);
        }
        if (!any) break;
      }
    };
    Moments sum = zero_moments(m, dim);
    Real h(1);
    node_sum(h, 0, 1, sum);
    Moments prev = sum;
    Moments total = sum;
    Real last_diff;
    bool converged = false;
    for (int level = 1; level <= 12; ++level) {
      Moments fresh = zero_moments(m, dim);
      Real hn = ldexp(h, -level);
      node_sum(hn, 1, 2, fresh);
      // total_l = total_{l-1} / 2 + h_l * sum over new nodes (weights already carry h_l)
      for (std::size_t j = 0; j < total.size(); ++j)
        for (std::size_t c = 0; c < dim; ++c) total[j][c] = total[j][c] * Real(0.5) + fresh[j][c];
      Real d = moments_diff(total, prev);
      if (converged) {
        err = d;
        return total;
      }
      if (level >= 3 && d <= quad_tol * moments_mag(total)) converged = true;
      last_diff = d;
      prev = total;
    }
    fail(ErrorCode::PrecisionExhausted, "tanh-sinh panel did not converge");
  };

  int n1 = static_cast<int>(std::ceil(0.7 * ctx_.digits)) + 10;
  int n2 = n1 + n1 / 2;
  Real err_total;
  Real absacc;
  Moments total = zero_moments(m, dim);
  int panels = 0;
  // First nominal panel [0, 1].
  {
    Real x1 = Real(1) / Real(pieces);
    Real e;
    add_moments(total, tanh_sinh(x1, e, absacc));
    err_total += e;
    ++panels;
    for (int p = 1; p < pieces; ++p) {
      Real a = Real(p) / Real(pieces), b = Real(p + 1) / Real(pieces);
      Real dummy;
      Moments lo = gauss_panel(a, b, n1, dummy);
      Moments hi = gauss_panel(a, b, n2, absacc);
      err_total += moments_diff(lo, hi);
      add_moments(total, hi);
      ++panels;
    }
  }
  Real a(1);
  Real wmax(4);
  int quiet = 0;
  for (;;) {
    if (a > Real(1e6)) fail(ErrorCode::TailNotConvergent, "Laplace tail did not decay");
    Real w = a < wmax ? a : wmax;
    Real dsing = distance_to_singularity(tau_at(a / umod));
    Real wsing = ldexp(dsing * umod, -1);
    if (wsing < w) w = wsing;
    Real b = a + w;
    Moments panel = zero_moments(m, dim);
    for (int p = 0; p < pieces; ++p) {
      Real pa = a + w * Real(p) / Real(pieces), pb = a + w * Real(p + 1) / Real(pieces);
      Real dummy;
      Moments lo = gauss_panel(pa, pb, n1, dummy);
      Moments hi = gauss_panel(pa, pb, n2, absacc);
      err_total += moments_diff(lo, hi);
      add_moments(panel, hi);
      ++panels;
    }
    add_moments(total, panel);
    // Majorant of the remaining tail from the integrand at b.
    Moments edge = zero_moments(m, dim);
    Real edge_abs;
    integrand_at(b, Real(1), edge, edge_abs);
    Real tail = edge_abs * Real(2) / ct;
    Real scale = moments_mag(total);
    if (tail <= quad_tol * scale && moments_mag(panel) <= quad_tol * scale * Real(100)) {
      if (++quiet >= 2) {
        err_total += tail;
        break;
      }
    } else {
      quiet = 0;
    }
    a = b;
  }
  err_total += round * absacc * Real(panels);

  Sample out;
  out.u = u;
  out.panels = panels;
  // theta_u^k I = sum_j P_{k,j} M_j, p_{k+1}(s) = (1 - s) p_k(s) + s p_k'(s)
  std::vector<long> poly{1};
  for (int k = 0; k < m; ++k) {
    std::vector<Complex> v(dim);
    Real e;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (poly[j] == 0) continue;
      for (std::size_t c = 0; c < dim; ++c) v[c] += total[j][c] * Real(poly[j]);
      e += err_total * Real(std::labs(poly[j]));
    }
    out.values.push_back(std::move(v));
    out.errors.push_back(std::move(e));
    std::vector<long> next(poly.size() + 1);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j] + static_cast<long>(j) * poly[j];
      next[j + 1] -= poly[j];
    }
    poly = next;
  }
  return out;
}

BorelSum::Sample laplace_eval(BorelSum& sum, const UPoint& u, int m) { return sum.laplace(u, m); }

// ---------------------------------------------------------------- Watson

bool WatsonReport::passed() const {
  if (rows.empty()) return false;
  // every sample must reach the asymptotic regime
  for (long n : checked_up_to)
    if (n < 0) return false;
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void WatsonReport::write_csv(std::ostream& os) const {
  os << "u_re,u_im,n,abs_I_minus_S_n,abs_term_n_plus_1,pass\n";
  for (const auto& r : rows) {
    PrecisionScope scope(64);
    Complex u = r.u.value();
    os << u.re().to_string(17) << "," << u.im().to_string(17) << "," << r.n << "," << r.error.to_string(6) << ","
       << r.next_term.to_string(6) << "," << (r.pass ? "true" : "false") << "\n";
  }
}

WatsonReport watson_check(BorelSum& numeric, const std::shared_ptr<const SeriesModel>& asymptotic,
                          const std::vector<UPoint>& samples, long max_terms) {
  PrecisionScope scope(numeric.context().bits());
  std::vector<WatsonSample> values;
  for (const auto& u : samples) {
    auto s = numeric.laplace(u, 1);
    values.push_back({u, s.values[0], s.errors[0]});
  }
  return watson_check(values, asymptotic, numeric.model().kappa, numeric.model().sigma, numeric.context().bits(),
                      max_terms);
}

WatsonReport watson_check(const std::vector<WatsonSample>& samples, const std::shared_ptr<const SeriesModel>& asymptotic,
                          const Rational& kappa, int sigma, mpfr_prec_t bits, long max_terms) {
  PrecisionScope scope(bits);
  NumericSeries asym(asymptotic, bits);
  WatsonReport report;
  for (const auto& sample : samples) {
    const UPoint& u = sample.u;
    const auto& value = sample.value;
    Complex logs = u.log() * Complex(Real(Rational(-kappa)));
    if (sigma == -1) logs += Complex(Real(0), pi());
    Real floor = (sample.error + ldexp(vec_mag(value), -static_cast<long>(bits) + 8)) * Real(100);
    // Each component is its own asymptotic series; collect its nonzero terms.
    std::size_t dim = value.size();
    long kmax = 256;
    std::vector<std::vector<Complex>> seq;
    std::vector<std::size_t> best;
    bool reached = false;
    for (;;) {
      auto terms = asym.term_values(logs, kmax);
      seq.assign(dim, {});
      for (const auto& [k0, v] : terms)
        for (std::size_t c = 0; c < dim; ++c)
          if (!v[c].is_zero()) seq[c].push_back(v[c]);
      best.assign(dim, 0);
      bool done = true;
      reached = true;
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 1; i < seq[c].size(); ++i)
          if (abs(seq[c][i]) < abs(seq[c][best[c]])) best[c] = i;
        bool past = best[c] + 8 < seq[c].size() && best[c] * 5 < seq[c].size() * 4;
        bool small = !seq[c].empty() && abs(seq[c][best[c]]) < floor * Real(1e-6);
        if (!past && !small) done = false;
        if (!past) reached = false;
      }
      if (done || kmax >= max_terms) break;
      kmax = std::min(kmax * 2, max_terms);
    }
    // Row n: every component still above the floor and below its optimal index.
    std::vector<Complex> partial(dim);
    long checked = -1;
    for (std::size_t n = 0;; ++n) {
      Real diff, next;
      bool any = false, pass = true;
      for (std::size_t c = 0; c < dim; ++c) {
        if (n + 1 >= seq[c].size() || n >= best[c]) continue;
        partial[c] += seq[c][n];
        Real t = abs(seq[c][n + 1]);
        if (t < floor) continue;
        Real e = abs(value[c] - partial[c]);
        any = true;
        pass = pass && e <= Real(2) * t;
        diff = max(diff, e);
        next = max(next, t);
      }
      if (!any) break;
      report.rows.push_back(WatsonRow{u, static_cast<long>(n), diff, next, pass});
      checked = static_cast<long>(n);
    }
    long opt = 0;
    for (auto b : best) opt = std::max(opt, static_cast<long>(b));
    report.optimal_index.push_back(opt);
    report.optimal_reached.push_back(reached);
    report.checked_up_to.push_back(checked);
    report.sample_error.push_back(sample.error);
  }
  return report;
}

// ---------------------------------------------------------------- radius

namespace {

struct CoefficientMagnitude {
  Rational exponent;
  std::vector<long> group;
  double log_mag;
};

double radius_from(const std::vector<CoefficientMagnitude>& coeffs) {
  std::map<std::vector<long>, std::vector<const CoefficientMagnitude*>> by_sector;
  for (const auto& c : coeffs)
    if (std::isfinite(c.log_mag)) by_sector[c.group].push_back(&c);
  double best = 0;
  bool have = false;
  for (const auto& [group, seq] : by_sector) {
    if (seq.size() < 8) continue;
    // R(y) = (|a_i| / |a_{i+1}|)^{1/(y_{i+1} - y_i)} ~ R (1 + c/y + d/y^2)
    std::vector<double> ys, rs;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      double dy = Rational(seq[i + 1]->exponent - seq[i]->exponent).get_d();
      if (dy <= 0) continue;
      ys.push_back(seq[i + 1]->exponent.get_d());
      rs.push_back(std::exp((seq[i]->log_mag - seq[i + 1]->log_mag) / dy));
    }
    std::size_t n = rs.size();
    if (n < 3) continue;
    // Second-order Richardson on the last three estimates.
    double y1 = ys[n - 3], y2 = ys[n - 2], y3 = ys[n - 1];
    double r1 = rs[n - 3], r2 = rs[n - 2], r3 = rs[n - 1];
    // Fit r = R + c/y + d/y^2 through three points.
    double a1 = 1 / y1, a2 = 1 / y2, a3 = 1 / y3;
    double det = (a2 - a1) * (a3 * a3 - a1 * a1) - (a3 - a1) * (a2 * a2 - a1 * a1);
    double R;
    if (std::fabs(det) < 1e-300) {
      R = r3;
    } else {
      double c = ((r2 - r1) * (a3 * a3 - a1 * a1) - (r3 - r1) * (a2 * a2 - a1 * a1)) / det;
      double d = ((a2 - a1) * (r3 - r1) - (a3 - a1) * (r2 - r1)) / det;
      R = r1 - c * a1 - d * a1 * a1;
    }
    if (!have || R < best) best = R;
    have = true;
  }
  if (!have) fail(ErrorCode::TruncationTooSmall, "not enough coefficients for a radius estimate");
  return best;
}

}  // namespace

double estimate_radius(const std::shared_ptr<const SeriesModel>& borel, long n_terms, mpfr_prec_t bits) {
  if (n_terms < 100) fail(ErrorCode::TruncationTooSmall, "radius estimate needs at least 100 terms");
  NumericSeries s(borel, bits);
  PrecisionScope scope(bits);
  std::vector<CoefficientMagnitude> mags;
  for (const auto& t : s.terms_through(n_terms - 1))
    mags.push_back({Rational(borel->offset + borel->step * t.k0), {static_cast<long>(t.sector)}, t.c.mag().log2_abs() * std::log(2.0)});
  return radius_from(mags);
}

double estimate_radius(const QSeries& regularized, const ComplexRational& lambda, long n_terms, mpfr_prec_t bits) {
  if (n_terms < 100) fail(ErrorCode::TruncationTooSmall, "radius estimate needs at least 100 terms");
  PrecisionScope scope(bits);
  Complex lam = lambda_value(lambda);
  auto poly_value = [&](const LambdaPoly& p) {
    Complex s;
    for (const auto& [e, c] : p.terms()) s += pow(lam, static_cast<long>(e)) * Real(c);
    return s;
  };
  std::vector<CoefficientMagnitude> mags;
  long count = 0;
  for (const auto& [key, c] : regularized.coeffs) {
    if (count++ >= n_terms) break;
    Rational e = regularized.offset + regularized.step * key.k0;
    for (const auto& [sector, hp] : c.value.parts()) {
      std::vector<long> group(key.kbar.begin(), key.kbar.end());
      group.push_back(static_cast<long>(sector));
      Jet j(hp.nil());
      for (int b = 0; b < hp.nil(); ++b) j[b] = poly_value(hp[b]);
      if (c.inv_gamma) {
        const LinearForm& a = c.inv_gamma->arg;
        Complex z = Complex(a.constant) + lam * Real(a.lambda_slope);
        j *= rgamma_jet(z, hp.nil()).scaled(Complex(Real(a.h_slope)));
      }
      mags.push_back({e, group, j.mag().log2_abs() * std::log(2.0)});
    }
  }
  return radius_from(mags);
}

}  // namespace asymcorr
