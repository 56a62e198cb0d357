#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace asymcorr {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);

bool is_integer(const Rational& x);
// Largest integer <= x.
long floor_long(const Rational& x);
// x - floor(x), in [0, 1).
Rational frac(const Rational& x);
long to_long(const Rational& x);
Rational factorial(long n);
Rational rational_pow(const Rational& x, long n);
long gcd_long(long a, long b);
long lcm_long(long a, long b);

}  // namespace asymcorr
