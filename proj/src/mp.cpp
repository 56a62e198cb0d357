#include "asymcorr/mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <gmpxx.h>

#include "asymcorr/errors.hpp"

namespace asymcorr {

namespace {

thread_local mpfr_prec_t g_active_bits = 200;

}  // namespace

mpfr_prec_t active_bits() { return g_active_bits; }

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_active_bits) { g_active_bits = bits; }
PrecisionScope::~PrecisionScope() { g_active_bits = saved_; }

Real::Real() {
  mpfr_init2(v_, g_active_bits);
  mpfr_set_zero(v_, 1);
}
Real::Real(int x) {
  mpfr_init2(v_, g_active_bits);
  mpfr_set_si(v_, x, MPFR_RNDN);
}
Real::Real(long x) {
  mpfr_init2(v_, g_active_bits);
  mpfr_set_si(v_, x, MPFR_RNDN);
}
Real::Real(double x) {
  mpfr_init2(v_, g_active_bits);
  mpfr_set_d(v_, x, MPFR_RNDN);
}
Real::Real(const Rational& x) {
  mpfr_init2(v_, g_active_bits);
  mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
}
Real::Real(const std::string& decimal) {
  mpfr_init2(v_, g_active_bits);
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    fail(ErrorCode::InvalidInput, "not a decimal number: " + decimal);
}
Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}
Real& Real::operator=(const Real& o) {
  if (this != &o) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real Real::operator-() const {
  Real r;
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}
Real operator+(const Real& a, const Real& b) {
  Real r;
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r;
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r;
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r;
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

long Real::exponent2() const { return mpfr_zero_p(v_) ? std::numeric_limits<long>::min() : mpfr_get_exp(v_); }

std::string Real::to_string(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Real pi() {
  Real r;
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

#define ASYMCORR_UNARY(name, fn)          \
  Real name(const Real& x) {              \
    Real r;                               \
    fn(r.get(), x.get(), MPFR_RNDN);      \
    return r;                             \
  }
ASYMCORR_UNARY(sqrt, mpfr_sqrt)
ASYMCORR_UNARY(exp, mpfr_exp)
ASYMCORR_UNARY(log, mpfr_log)
ASYMCORR_UNARY(sin, mpfr_sin)
ASYMCORR_UNARY(cos, mpfr_cos)
ASYMCORR_UNARY(abs, mpfr_abs)
#undef ASYMCORR_UNARY

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
Real hypot(const Real& a, const Real& b) {
  Real r;
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Complex Complex::polar(const Real& modulus, const Real& angle) {
  Real s, c;
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {modulus * c, modulus * s};
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}
Complex operator*(const Complex& a, const Complex& b) {
  Complex r;
  mpfr_fmms(r.re_.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_fmma(r.im_.get(), a.re_.get(), b.im_.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  return r;
}
Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}
Complex& Complex::operator*=(const Real& o) {
  re_ *= o;
  im_ *= o;
  return *this;
}
Complex& Complex::operator/=(const Complex& o) {
  *this = *this * inverse(o);
  return *this;
}
void Complex::add_product(const Complex& a, const Complex& b) {
  Real t;
  mpfr_fmms(t.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  re_ += t;
  mpfr_fmma(t.get(), a.re_.get(), b.im_.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  im_ += t;
}
Real Complex::norm() const {
  Real r;
  mpfr_fmma(r.get(), re_.get(), re_.get(), im_.get(), im_.get(), MPFR_RNDN);
  return r;
}
std::string Complex::to_string(int digits) const {
  return "(" + re_.to_string(digits) + ", " + im_.to_string(digits) + ")";
}

Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
Real arg(const Complex& z) { return atan2(z.im(), z.re()); }
Real mag(const Complex& z) { return max(abs(z.re()), abs(z.im())); }
Complex exp(const Complex& z) { return Complex::polar(exp(z.re()), z.im()); }
Complex log(const Complex& z) {
  if (z.is_zero()) fail(ErrorCode::NonInvertible, "log of zero");
  return {log(abs(z)), arg(z)};
}
Complex sqrt(const Complex& z) {
  if (z.is_zero()) return z;
  Complex l = log(z);
  return exp(Complex(ldexp(l.re(), -1), ldexp(l.im(), -1)));
}
Complex inverse(const Complex& z) {
  if (z.is_zero()) fail(ErrorCode::NonInvertible, "division by zero");
  Real n = z.norm();
  return {z.re() / n, -z.im() / n};
}
Complex pow(const Complex& z, long n) {
  if (n < 0) return inverse(pow(z, -n));
  Complex r(1), b = z;
  while (n > 0) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n > 0) b *= b;
  }
  return r;
}
Complex pow(const Complex& z, const Complex& w) { return exp(w * log(z)); }

Jet::Jet(int size, const Complex& constant) : c_(static_cast<std::size_t>(size)) {
  if (size > 0) c_[0] = constant;
}

Jet Jet::linear(int size, const Complex& a, const Complex& b) {
  Jet j(size, a);
  if (size > 1) j.c_[1] = b;
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}
Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}
Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.size());
  std::size_t n = a.c_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j].add_product(a.c_[i], b.c_[j]);
  }
  return r;
}
Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}
Jet& Jet::operator*=(const Complex& s) {
  for (auto& x : c_) x *= s;
  return *this;
}
Jet Jet::operator-() const {
  Jet r(size());
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
  return r;
}

Jet Jet::inverse() const {
  int n = size();
  Jet r(n);
  if (n == 0) return r;
  Complex inv0 = asymcorr::inverse(c_[0]);
  r.c_[0] = inv0;
  for (int k = 1; k < n; ++k) {
    Complex s;
    for (int j = 1; j <= k; ++j) s.add_product(c_[static_cast<std::size_t>(j)], r.c_[static_cast<std::size_t>(k - j)]);
    r.c_[static_cast<std::size_t>(k)] = -(s * inv0);
  }
  return r;
}

Jet Jet::exp() const {
  int n = size();
  Jet r(n);
  if (n == 0) return r;
  // r' = a' r, coefficientwise.
  r.c_[0] = asymcorr::exp(c_[0]);
  for (int k = 1; k < n; ++k) {
    Complex s;
    for (int j = 1; j <= k; ++j)
      s.add_product(c_[static_cast<std::size_t>(j)] * Real(j), r.c_[static_cast<std::size_t>(k - j)]);
    r.c_[static_cast<std::size_t>(k)] = s * (Real(1) / Real(k));
  }
  return r;
}

Jet Jet::log() const {
  int n = size();
  Jet r(n);
  if (n == 0) return r;
  Jet rest = *this * asymcorr::inverse(c_[0]);
  rest.c_[0] = Complex();
  // log(1 + x) = sum (-1)^{k+1} x^k / k
  Jet p = rest;
  for (int k = 1; k < n; ++k) {
    Complex s = Complex(Real((k % 2 == 1) ? 1 : -1) / Real(k));
    for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)].add_product(p.c_[static_cast<std::size_t>(i)], s);
    p *= rest;
  }
  r.c_[0] = asymcorr::log(c_[0]);
  return r;
}

Jet Jet::scaled(const Complex& s) const {
  Jet r = *this;
  Complex f(1);
  for (auto& x : r.c_) {
    x *= f;
    f *= s;
  }
  return r;
}

Real Jet::mag() const {
  Real m;
  for (const auto& x : c_) m = max(m, asymcorr::mag(x));
  return m;
}

const std::vector<Rational>& bernoulli_numbers(int n) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  // sum_{k=0}^{m} C(m+1, k) B_k = 0
  while (static_cast<int>(cache.size()) <= n) {
    long m = static_cast<long>(cache.size());
    Rational s = 0;
    mpz_class binom = 1;
    for (long k = 0; k < m; ++k) {
      s += Rational(binom) * cache[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    cache.push_back(-s / Rational(m + 1));
  }
  return cache;
}

namespace {

Complex sin_c(const Complex& z) {
  // sin(a + ib) = sin a cosh b + i cos a sinh b
  Real eb = exp(z.im()), emb = exp(-z.im());
  Real ch = ldexp(eb + emb, -1), sh = ldexp(eb - emb, -1);
  return {sin(z.re()) * ch, cos(z.re()) * sh};
}
Complex cos_c(const Complex& z) {
  Real eb = exp(z.im()), emb = exp(-z.im());
  Real ch = ldexp(eb + emb, -1), sh = ldexp(eb - emb, -1);
  return {cos(z.re()) * ch, -(sin(z.re()) * sh)};
}

// Stirling series for log Gamma(w + e), Re w large.
Jet stirling_jet(const Complex& w, int size) {
  mpfr_prec_t bits = active_bits();
  Jet W = Jet::linear(size, w, Complex(1));
  Jet logW = W.log();
  Jet out = (W - Jet(size, Complex(Real(1) / Real(2)))) * logW - W;
  out[0] += Complex(ldexp(log(ldexp(pi(), 1)), -1));
  Jet winv = W.inverse();
  Jet winv2 = winv * winv;
  Jet p = winv;
  Real scale = abs(w);
  double eps_log2 = -static_cast<double>(bits) - 8.0;
  int kmax = static_cast<int>(bits);
  for (int k = 1; k <= kmax; ++k) {
    const auto& b = bernoulli_numbers(2 * k);
    Real coeff(b[static_cast<std::size_t>(2 * k)] / Rational(2L * k * (2L * k - 1)));
    Jet term = p * Complex(coeff);
    out += term;
    double mag = term.mag().log2_abs();
    if (mag < eps_log2 + out[0].re().log2_abs() && mag < eps_log2 + scale.log2_abs()) break;
    p *= winv2;
    if (k == kmax) fail(ErrorCode::PrecisionExhausted, "Stirling series did not converge");
  }
  return out;
}

}  // namespace

Jet log_gamma_jet(const Complex& z, int size) {
  mpfr_prec_t bits = active_bits();
  Real w0(0.12 * static_cast<double>(bits) + 10.0);
  long m = 0;
  if (z.re() < w0) m = static_cast<long>(std::ceil((w0 - z.re()).to_double()));
  Jet shifted_prod(size, Complex(1));
  for (long j = 0; j < m; ++j) shifted_prod *= Jet::linear(size, z + Complex(j), Complex(1));
  Jet out = stirling_jet(z + Complex(m), size);
  if (m > 0) out -= shifted_prod.log();
  return out;
}

Complex log_gamma(const Complex& z) { return log_gamma_jet(z, 1)[0]; }

Jet rgamma_jet(const Complex& z, int size) {
  if (z.re() >= Real(0.5)) return (-log_gamma_jet(z, size)).exp();
  // 1/Gamma(z + e) = Gamma(1 - z - e) sin(pi (z + e)) / pi
  Jet g = log_gamma_jet(Complex(1) - z, size).scaled(Complex(-1)).exp();
  Real p = pi();
  Complex s0 = sin_c(z * Complex(p)), c0 = cos_c(z * Complex(p));
  // poles of Gamma: sin(pi z) vanishes exactly at nonpositive integers
  if (z.im().is_zero() && mpfr_integer_p(z.re().get())) {
    s0 = Complex(0);
    mpz_class n;
    mpfr_get_z(n.get_mpz_t(), z.re().get(), MPFR_RNDN);
    c0 = Complex(mpz_odd_p(n.get_mpz_t()) ? -1 : 1);
  }
  Jet s(size);
  Complex f(1);
  for (int i = 0; i < size; ++i) {
    // d^i/de^i sin(pi(z+e)) / i! = pi^i sin(pi z + i pi/2) / i!
    const Complex& base = (i % 2 == 0) ? s0 : c0;
    int sign = (i % 4 == 0 || i % 4 == 1) ? 1 : -1;
    s[i] = base * f * Real(sign);
    f *= Complex(p / Real(i + 1));
  }
  return g * s * Complex(Real(1) / p);
}

Complex rgamma(const Complex& z) { return rgamma_jet(z, 1)[0]; }

}  // namespace asymcorr
