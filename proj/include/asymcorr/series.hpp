#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/cohomology.hpp"
#include "asymcorr/group.hpp"

namespace asymcorr {

enum class Variable { q, t, tau, u };
std::string to_string(Variable v);

// v^{lambda_coeff * lambda + h_coeff * H}; with over_z the exponent is divided by z.
struct Prefactor {
  Rational lambda_coeff = 0;
  Rational h_coeff = 0;
  bool operator==(const Prefactor& o) const { return lambda_coeff == o.lambda_coeff && h_coeff == o.h_coeff; }
  std::string to_string(Variable v) const;
};

struct SeriesKey {
  long k0 = 0;
  std::vector<int> kbar;
  auto operator<=>(const SeriesKey& o) const = default;
};

struct Truncation {
  long max_k0 = 40;
  int max_kbar = 0;
};

// One unexpanded term on a single sector.
struct SliceTerm {
  long k0 = 0;
  std::size_t sector = 0;
  LinearFactorProduct factors;
};

// The t^g-coefficient slice with weighted multiplicities a, in factor form.
struct Slice {
  SpaceTag space = SpaceTag::X;
  Variable variable = Variable::t;
  Prefactor prefactor;
  Rational offset = 0;
  Rational step = 1;
  std::vector<Rational> a;
  std::size_t gbar = 0;  // element index of the gbar coset
  std::vector<SliceTerm> terms;

  // Exponent of the variable carried by the k0 term, prefactor included.
  LinearForm exponent(long k0) const;
};

struct Coefficient {
  CohomClass value;
  std::optional<GammaFactor> inv_gamma;
  std::optional<SliceTerm> factored;
};

class QSeries {
 public:
  Variable variable = Variable::t;
  SpaceTag space = SpaceTag::X;
  SectorBasis basis;
  Prefactor prefactor;
  Rational offset = 0;
  Rational step = 1;
  Truncation trunc;
  std::map<SeriesKey, Coefficient> coeffs;

  LinearForm exponent(long k0) const;
  const Coefficient* find(const SeriesKey& key) const;
  // Entries with the given multi-index, as a slice-shaped view.
  QSeries restricted_to(const std::vector<int>& kbar) const;
  bool operator==(const QSeries& o) const;
};

enum class AgeSignPolicy { Phase, Strict };

// Slices in factor form (k0 = 0..max_k0; zero terms and absent sectors are skipped).
Slice x_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0);
Slice y_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0);
Slice fjrw_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0,
                 AgeSignPolicy policy = AgeSignPolicy::Phase);
Slice z_slice(const GroupData& group, const std::vector<Rational>& a, long max_k0);

// Weighted multiplicities of a gbar element (the slice input for coset numerics).
std::vector<Rational> coset_multiplicities(const GroupData& group, std::size_t gbar);

QSeries build_IX(const GroupData& group, const Truncation& trunc);
QSeries build_IY(const GroupData& group, const Truncation& trunc);
// Raw product forms: modification factor on X, toric product on Y.
QSeries build_IX_modification(const GroupData& group, const Truncation& trunc);
QSeries build_IY_product(const GroupData& group, const Truncation& trunc);

// Borel regularization with divergent variable w = sigma * v^kappa: exponent E -> kappa*E and
// coefficients divided by Gamma(1 + kappa*E).
QSeries borel_regularize(const QSeries& s, const Rational& kappa, int sigma);
// X-side regularization, kappa = r/d.
QSeries regularize(const QSeries& ix, const GroupData& group);

QSeries mlk_transform(const QSeries& ix, const GroupData& group, AgeSignPolicy policy = AgeSignPolicy::Phase);
QSeries qsd_transform(const QSeries& iy, const GroupData& group);

// QSD through Laurent expansion of 1/(-d(lambda+H)) on expanded coefficients; the k0 = 0 term is
// excluded because it has no limit in that representation.
QSeries qsd_transform_laurent(const QSeries& iy, const GroupData& group);

QSeries series_from_slice(const Slice& slice, const GroupData& group, long max_k0);

}  // namespace asymcorr
