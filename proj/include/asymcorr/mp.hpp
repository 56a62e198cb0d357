#pragma once

#include <mpfr.h>

#include <cstddef>
#include <string>
#include <vector>

#include "asymcorr/rational.hpp"

namespace asymcorr {

// Precision in bits for newly created numbers on this thread.
mpfr_prec_t active_bits();
mpfr_prec_t bits_for_digits(int digits);

// Sets the active precision for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

// MPFR number; results of arithmetic carry the active precision.
class Real {
 public:
  Real();
  Real(int x);     // NOLINT: implicit numeric embedding
  Real(long x);    // NOLINT
  Real(double x);  // NOLINT
  explicit Real(const Rational& x);
  explicit Real(const std::string& decimal);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }

  bool is_zero() const { return mpfr_zero_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log2 |x|, -inf for zero.
  double log2_abs() const;
  long exponent2() const;
  std::string to_string(int digits) const;

 private:
  mpfr_t v_;
};

Real pi();
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real abs(const Real& x);
Real hypot(const Real& a, const Real& b);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);

struct ComplexRational {
  Rational re = 0;
  Rational im = 0;
  bool operator==(const ComplexRational& o) const { return re == o.re && im == o.im; }
};

class Complex {
 public:
  Complex() = default;
  Complex(const Real& re) : re_(re) {}  // NOLINT: implicit real embedding
  Complex(const Real& re, const Real& im) : re_(re), im_(im) {}
  Complex(int x) : re_(x) {}  // NOLINT
  Complex(long x) : re_(x) {}  // NOLINT
  explicit Complex(const Rational& x) : re_(x) {}
  explicit Complex(const ComplexRational& x) : re_(x.re), im_(x.im) {}
  static Complex polar(const Real& modulus, const Real& angle);

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator*=(const Real& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return {-re_, -im_}; }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  // this += a * b
  void add_product(const Complex& a, const Complex& b);

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  Real norm() const;  // squared modulus
  Complex conj() const { return {re_, -im_}; }
  std::string to_string(int digits) const;

 private:
  Real re_;
  Real im_;
};

Real abs(const Complex& z);
Real arg(const Complex& z);
// max(|re|, |im|), cheap magnitude for bounds.
Real mag(const Complex& z);
Complex exp(const Complex& z);
// Principal branch, arg in (-pi, pi].
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex inverse(const Complex& z);
Complex pow(const Complex& z, long n);
// exp(w log z) on the principal branch.
Complex pow(const Complex& z, const Complex& w);

// Truncated power series in a nilpotent variable with complex coefficients.
class Jet {
 public:
  Jet() = default;
  explicit Jet(int size) : c_(static_cast<std::size_t>(size)) {}
  Jet(int size, const Complex& constant);
  // a + b * H
  static Jet linear(int size, const Complex& a, const Complex& b);

  int size() const { return static_cast<int>(c_.size()); }
  const Complex& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  Complex& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator*=(const Complex& s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, const Complex& s) { return a *= s; }
  Jet operator-() const;

  // Requires a nonzero constant term.
  Jet inverse() const;
  Jet exp() const;
  Jet log() const;
  // Coefficient i multiplied by s^i.
  Jet scaled(const Complex& s) const;
  Real mag() const;

 private:
  std::vector<Complex> c_;
};

// Exact Bernoulli numbers B_0, ..., B_n (B_1 = -1/2).
const std::vector<Rational>& bernoulli_numbers(int n);
// Taylor coefficients of log Gamma(z + e) in e, up to e^{size-1}; the branch is unspecified.
Jet log_gamma_jet(const Complex& z, int size);
Complex log_gamma(const Complex& z);
// Taylor coefficients of 1/Gamma(z + e); exact zeros at the poles of Gamma.
Jet rgamma_jet(const Complex& z, int size);
Complex rgamma(const Complex& z);

}  // namespace asymcorr
