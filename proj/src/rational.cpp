#include "asymcorr/rational.hpp"

#include <numeric>

#include "asymcorr/errors.hpp"

namespace asymcorr {

Rational make_rational(long num, long den) {
  if (den == 0) fail(ErrorCode::InvalidInput, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      mpz_class n(s, 10);
      return Rational(n);
    }
    mpz_class n(s.substr(0, slash), 10);
    mpz_class d(s.substr(slash + 1), 10);
    if (d == 0) fail(ErrorCode::InvalidInput, "zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::InvalidInput, "not a rational: '" + s + "'");
  }
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str() + "/1";
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

long floor_long(const Rational& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f.get_si();
}

Rational frac(const Rational& x) { return x - Rational(floor_long(x)); }

long to_long(const Rational& x) {
  if (!is_integer(x)) fail(ErrorCode::NonIntegerOffset, "expected integer, got " + to_string(x));
  return x.get_num().get_si();
}

Rational factorial(long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational rational_pow(const Rational& x, long n) {
  Rational base = n >= 0 ? x : Rational(1) / x;
  unsigned long e = static_cast<unsigned long>(n >= 0 ? n : -n);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }
long lcm_long(long a, long b) { return std::lcm(a, b); }

}  // namespace asymcorr
