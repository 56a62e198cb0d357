#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "asymcorr/series.hpp"

namespace asymcorr {

// sum_e z^e P_e(lambda, H), rational z-exponents, all parts sharing one H-nilpotency.
class ZHPoly {
 public:
  ZHPoly() = default;
  explicit ZHPoly(int nil) : nil_(nil) {}
  static ZHPoly term(const Rational& zexp, const HPoly& p);
  // a*lambda + b*H + c*z
  static ZHPoly linear(int nil, const Rational& a, const Rational& b, const Rational& c);
  // 1 / (b*H + c*z) for c != 0, expanded in the nilpotent H.
  static ZHPoly inverse_unit(int nil, const Rational& b, const Rational& c);

  int nil() const { return nil_; }
  const std::map<Rational, HPoly>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  ZHPoly& operator+=(const ZHPoly& o);
  ZHPoly& operator*=(const ZHPoly& o);
  ZHPoly& operator*=(const Rational& c);
  friend ZHPoly operator*(ZHPoly a, const ZHPoly& b) { return a *= b; }
  friend ZHPoly operator+(ZHPoly a, const ZHPoly& b) { return a += b; }
  bool operator==(const ZHPoly& o) const;
  bool operator!=(const ZHPoly& o) const { return !(*this == o); }

  // Multiply by z^e.
  ZHPoly shifted(const Rational& e) const;
  HPoly at_z_one() const;
  std::string to_string() const;

 private:
  void add(const Rational& e, const HPoly& p);
  int nil_ = 1;
  std::map<Rational, HPoly> parts_;
};

using ZClass = std::map<std::size_t, ZHPoly>;

// A series in the same variable as its z = 1 counterpart, with z restored in every coefficient.
// The prefactor exponent is divided by z.
struct ZSeries {
  Variable variable = Variable::t;
  SpaceTag space = SpaceTag::X;
  Prefactor prefactor;
  Rational offset = 0;
  Rational step = 1;
  Truncation trunc;
  std::map<SeriesKey, ZClass> coeffs;

  bool operator==(const ZSeries& o) const;
};

// Grades of basis entries and of the coordinates t^g; lambda and H have grade 1.
struct GradingData {
  SpaceTag space = SpaceTag::X;
  std::map<BasisEntry, Rational> entry_grade;
  std::vector<Rational> coordinate_grade;  // per gbar generator

  static GradingData make(const GroupData& group, SpaceTag space);
  const Rational& grade(const BasisEntry& e) const;
};

// X: z^{1-Gr} z^{-r lambda} I(t z^{r/d}, 1).  Y: z^{1-Gr} z^{rH} I(q / z^r, 1).
ZSeries restore_z(const QSeries& at_z1, const GradingData& grading, const GroupData& group);
QSeries set_z_to_one(const ZSeries& s, const GroupData& group);

// Coefficients with z kept from the start: modification-factor form on X, Gamma form on Y.
ZSeries build_IX_z(const GroupData& group, const Truncation& trunc);
ZSeries build_IY_z(const GroupData& group, const Truncation& trunc);

}  // namespace asymcorr
