#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "asymcorr/mp.hpp"
#include "asymcorr/picard_fuchs.hpp"
#include "asymcorr/series.hpp"

namespace asymcorr {

// Exact description of one coset slice of an I-function (or of its Borel transform) from which
// numeric coefficients are produced at any precision: an exact head in factor form, continued by
// the recursion of an annihilating operator.
struct SeriesModel {
  SpaceTag space = SpaceTag::X;
  Variable variable = Variable::t;
  std::size_t gbar = 0;
  std::vector<BasisEntry> components;
  std::map<std::size_t, int> nil;
  Rational offset = 0;  // e_k = offset + step * k0
  Rational step = 1;
  Rational lambda_coeff = 0;  // exponent e_k + lambda_coeff * lambda + h_coeff * H
  Rational h_coeff = 0;
  ComplexRational lambda;
  std::vector<SliceTerm> head;  // exact terms with k0 <= head_max_k0
  long head_max_k0 = 0;
  ThetaOperator op;  // annihilator with minimal power 0
  // Borel transform of base: exponent E -> kappa E, coefficient times sigma^E / Gamma(1 + kappa E).
  std::shared_ptr<const SeriesModel> base;
  Rational kappa = 1;
  int sigma = 1;

  bool is_borel() const { return base != nullptr; }
  std::size_t component_index(const BasisEntry& e) const;
};

// Coset slice of I^X, I^Y, I^(W,G) or I^Z together with its annihilator.
std::shared_ptr<const SeriesModel> series_model(const GroupData& group, SpaceTag space, std::size_t gbar,
                                                const ComplexRational& lambda);
std::shared_ptr<const SeriesModel> borel_model(const std::shared_ptr<const SeriesModel>& base,
                                               const Rational& kappa, int sigma);
// Annihilator of the coset slice in its natural variable, before normalization.
ThetaOperator slice_operator(const GroupData& group, SpaceTag space, std::size_t gbar);
// Largest k0 <= scan at which the lowest-power coefficient of op is not invertible on the slice
// exponent; -1 if none.
long resonance_bound(const ThetaOperator& op, const Rational& offset, const Rational& step,
                     const Rational& lambda_coeff, long scan);

// Complex numeric coefficients of a theta-operator: terms[i] = (power, coefficients of theta^j).
struct NumericOperator {
  std::vector<std::pair<Rational, std::vector<Complex>>> terms;
  int order = 0;

  static NumericOperator make(const ThetaOperator& op, const ComplexRational& lambda);
  // P_i(E) for a jet E.
  Jet evaluate(std::size_t i, const Jet& e) const;
};

Complex lambda_value(const ComplexRational& lambda);

struct NumericTerm {
  long k0 = 0;
  std::size_t sector = 0;
  Jet c;
};

// Numeric coefficients of a model at a fixed precision, extended on demand.
class NumericSeries {
 public:
  NumericSeries(std::shared_ptr<const SeriesModel> model, mpfr_prec_t bits);

  const SeriesModel& model() const { return *model_; }
  mpfr_prec_t bits() const { return bits_; }
  // All nonzero terms with k0 <= k.
  const std::vector<NumericTerm>& terms_through(long k);
  const NumericTerm* term(long k0);
  // Exponent jet e_k + mu + h H of size n.
  Jet exponent(long k0, int n) const;

  // theta^i f for i < m at log v, as [i][component]; sums until the terms are negligible.
  std::vector<std::vector<Complex>> evaluate(const Complex& logv, int m);
  // Component vector of each nonzero term with k0 <= kmax at log v.
  std::vector<std::pair<long, std::vector<Complex>>> term_values(const Complex& logv, long kmax);
  // Estimated log2 of the largest term magnitude at log v.
  double log2_max_term(const Complex& logv, long max_terms = 200000);

 private:
  void extend_to(long k);
  Jet head_coefficient(const SliceTerm& t) const;

  std::shared_ptr<const SeriesModel> model_;
  mpfr_prec_t bits_;
  NumericOperator op_;
  Complex mu_;
  std::vector<NumericTerm> terms_;
  std::map<long, std::size_t> index_;
  long computed_ = -1;
  std::vector<long> shifts_;  // k0 offsets of the operator terms
  std::unique_ptr<NumericSeries> base_;
};

// Evaluates a convergent model at log v, raising the precision to cover cancellation; logv is
// recomputed at the raised precision.
std::vector<std::vector<Complex>> evaluate_convergent(const std::shared_ptr<const SeriesModel>& model,
                                                      const std::function<Complex()>& logv, int m,
                                                      mpfr_prec_t bits);

}  // namespace asymcorr
