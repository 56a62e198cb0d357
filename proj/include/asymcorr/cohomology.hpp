#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/group.hpp"
#include "asymcorr/rational.hpp"

namespace asymcorr {

// Laurent polynomial in the equivariant parameter lambda with rational coefficients.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(const Rational& c);  // NOLINT: implicit scalar embedding
  LambdaPoly(long c) : LambdaPoly(Rational(c)) {}  // NOLINT
  static LambdaPoly monomial(const Rational& c, int exponent);
  static LambdaPoly lambda() { return monomial(1, 1); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<int, Rational>& terms() const { return terms_; }
  Rational coefficient(int exponent) const;
  int min_exponent() const;
  int max_exponent() const;
  bool is_constant() const;
  bool has_limit_at_zero() const;
  // Value at lambda = 0; throws LambdaLimitUndefined on negative exponents.
  Rational at_zero() const;

  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  LambdaPoly& operator*=(const LambdaPoly& o);
  LambdaPoly& operator*=(const Rational& c);
  LambdaPoly operator-() const;
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator*(LambdaPoly a, const Rational& c) { return a *= c; }
  friend LambdaPoly operator*(const Rational& c, LambdaPoly a) { return a *= c; }
  bool operator==(const LambdaPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const LambdaPoly& o) const { return !(*this == o); }

  std::string to_string(const std::string& var = "λ") const;

 private:
  void add_term(int e, const Rational& c);
  std::map<int, Rational> terms_;
};

// Polynomial in H with LambdaPoly coefficients, truncated by H^nil = 0.
class HPoly {
 public:
  HPoly() = default;
  explicit HPoly(int nil) : c_(static_cast<std::size_t>(nil)) {}
  HPoly(int nil, const LambdaPoly& constant);
  static HPoly monomial(int nil, int power, const LambdaPoly& coeff = LambdaPoly(1));

  int nil() const { return static_cast<int>(c_.size()); }
  const LambdaPoly& operator[](int p) const { return c_[static_cast<std::size_t>(p)]; }
  LambdaPoly& operator[](int p) { return c_[static_cast<std::size_t>(p)]; }
  bool is_zero() const;

  HPoly& operator+=(const HPoly& o);
  HPoly& operator-=(const HPoly& o);
  HPoly& operator*=(const HPoly& o);
  HPoly& operator*=(const LambdaPoly& s);
  HPoly operator-() const;
  friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
  friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
  friend HPoly operator*(HPoly a, const HPoly& b) { return a *= b; }
  friend HPoly operator*(HPoly a, const LambdaPoly& s) { return a *= s; }
  bool operator==(const HPoly& o) const;
  bool operator!=(const HPoly& o) const { return !(*this == o); }

  // Drop powers >= new_nil.
  HPoly truncated(int new_nil) const;
  std::string to_string() const;

 private:
  std::vector<LambdaPoly> c_;
};

// constant + lambda_slope * lambda + h_slope * H.
struct LinearForm {
  Rational constant = 0;
  Rational lambda_slope = 0;
  Rational h_slope = 0;

  bool is_zero() const { return constant == 0 && lambda_slope == 0 && h_slope == 0; }
  bool is_lambda_free() const { return lambda_slope == 0; }
  LinearForm operator+(const Rational& c) const { return {constant + c, lambda_slope, h_slope}; }
  LinearForm operator-(const Rational& c) const { return {constant - c, lambda_slope, h_slope}; }
  LinearForm operator+(const LinearForm& o) const {
    return {constant + o.constant, lambda_slope + o.lambda_slope, h_slope + o.h_slope};
  }
  LinearForm operator*(const Rational& c) const { return {constant * c, lambda_slope * c, h_slope * c}; }
  LinearForm operator-() const { return {-constant, -lambda_slope, -h_slope}; }
  bool operator==(const LinearForm& o) const {
    return constant == o.constant && lambda_slope == o.lambda_slope && h_slope == o.h_slope;
  }
  // If *this == c * o for a nonzero rational c, returns c.
  std::optional<Rational> ratio_to(const LinearForm& o) const;
  HPoly to_hpoly(int nil) const;
  std::string to_string() const;
};

// Inverse of a unit form in Q[lambda^{±1}][H]/H^nil; throws NonInvertible otherwise.
HPoly invert_form(const LinearForm& f, int nil);

// scalar * prod(numer) / prod(denom), kept unexpanded so factors can cancel before any expansion.
class LinearFactorProduct {
 public:
  LinearFactorProduct() = default;
  explicit LinearFactorProduct(const Rational& scalar) : scalar_(scalar) {}

  const Rational& scalar() const { return scalar_; }
  const std::vector<LinearForm>& numer() const { return numer_; }
  const std::vector<LinearForm>& denom() const { return denom_; }
  bool is_zero() const;

  LinearFactorProduct& multiply(const LinearForm& f);
  LinearFactorProduct& divide(const LinearForm& f);
  LinearFactorProduct& operator*=(const LinearFactorProduct& o);
  LinearFactorProduct& operator*=(const Rational& c);

  // Cancel numerator/denominator pairs that are rational multiples of each other.
  LinearFactorProduct& cancel();
  // Cancel, set lambda = 0 in every factor, cancel again. Throws LambdaLimitUndefined if a denominator dies.
  LinearFactorProduct lambda_limit() const;
  HPoly expand(int nil) const;
  std::string to_string() const;

 private:
  Rational scalar_ = 1;
  std::vector<LinearForm> numer_;
  std::vector<LinearForm> denom_;
};

// Gamma(a) / Gamma(b) for forms differing by an integer; throws NonIntegerOffset otherwise.
LinearFactorProduct gamma_quotient(const LinearForm& a, const LinearForm& b);
// Gamma(1 + x) / Gamma(1 + x - n).
LinearFactorProduct gamma_ratio(const LinearForm& x, long n);

// 1 / Gamma(arg), arg = residue + shift + lambda_slope*lambda + h_slope*H.
struct GammaFactor {
  LinearForm arg;

  Rational residue() const { return frac(arg.constant); }
  long shift() const { return floor_long(arg.constant); }
  bool compatible(const GammaFactor& o) const;
  // Polynomial p with 1/Gamma(arg) = p / Gamma(target.arg); requires target.shift() >= shift().
  LinearFactorProduct lift_to(const GammaFactor& target) const;
  std::string to_string() const;
};

enum class SpaceTag { X, Y, FJRW, Z };
std::string to_string(SpaceTag s);

struct BasisEntry {
  std::size_t sector = 0;  // element index in GroupData
  int h_power = 0;
  bool operator==(const BasisEntry& o) const { return sector == o.sector && h_power == o.h_power; }
  bool operator<(const BasisEntry& o) const {
    return sector != o.sector ? sector < o.sector : h_power < o.h_power;
  }
};

class SectorBasis {
 public:
  static SectorBasis make(const GroupData& group, SpaceTag tag);

  SpaceTag tag() const { return tag_; }
  const std::vector<BasisEntry>& entries() const { return entries_; }
  int nil(std::size_t sector) const;
  // FJRW only: basis vector is exp(i*pi*phase) * phi_h.
  Rational phase(std::size_t sector) const;
  // Entries whose sector lies in the given gbar coset (gbar element index).
  std::vector<BasisEntry> block(const GroupData& group, std::size_t gbar) const;
  std::vector<std::size_t> sectors() const;

 private:
  SpaceTag tag_ = SpaceTag::X;
  std::vector<BasisEntry> entries_;
  std::map<std::size_t, int> nil_;
  std::map<std::size_t, Rational> phase_;
};

// Element of a sector-graded module: sector -> HPoly.
class CohomClass {
 public:
  CohomClass() = default;
  static CohomClass on_sector(std::size_t sector, const HPoly& value);

  const std::map<std::size_t, HPoly>& parts() const { return parts_; }
  bool is_zero() const;
  const HPoly* part(std::size_t sector) const;
  LambdaPoly component(const BasisEntry& e) const;

  CohomClass& operator+=(const CohomClass& o);
  CohomClass& operator-=(const CohomClass& o);
  CohomClass& operator*=(const LambdaPoly& s);
  // Sector-wise product with an HPoly of matching nil.
  CohomClass& multiply_each(const HPoly& p);
  CohomClass operator-() const;
  friend CohomClass operator+(CohomClass a, const CohomClass& b) { return a += b; }
  friend CohomClass operator-(CohomClass a, const CohomClass& b) { return a -= b; }
  friend CohomClass operator*(CohomClass a, const LambdaPoly& s) { return a *= s; }
  bool operator==(const CohomClass& o) const;
  bool operator!=(const CohomClass& o) const { return !(*this == o); }

  bool has_lambda_limit() const;
  CohomClass lambda_limit() const;
  std::string to_string() const;

 private:
  void prune();
  std::map<std::size_t, HPoly> parts_;
};

}  // namespace asymcorr
