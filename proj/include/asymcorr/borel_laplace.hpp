#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "asymcorr/numeric_series.hpp"

namespace asymcorr {

// Working precision and tolerances, as decimal exponents (tolerance = 10^-x).
struct PrecisionContext {
  int digits = 60;
  double ode_local_digits = 55;
  double quad_digits = 50;
  double match_digits = 30;

  static PrecisionContext with_digits(int digits);
  void validate() const;
  mpfr_prec_t bits() const { return bits_for_digits(digits); }
  Real ode_local() const;
  Real quad() const;
  Real match() const;
};

// Point given by exact modulus and argument.
struct UPoint {
  Rational modulus = 1;
  Rational arg = 0;

  Complex value() const;
  Complex log() const;
  std::string to_string() const;
};

// Open sector lo < arg(u) < hi in which the asymptotic statement is made.
struct WatsonRegion {
  double lo = -1.5707963267948966;
  double hi = 1.5707963267948966;
  bool contains(const Rational& arg) const;
};
// |arg u| < min(pi/|r|, pi/2) for odd sum c_j, 0 < arg u < min(2 pi/|r|, pi/2) for even.
WatsonRegion watson_region(const GroupData& group);

struct RaySpec {
  Rational angle = 0;  // arg tau
  WatsonRegion region;
};

// Borel transform on a ray: direct summation near 0, Taylor continuation driven by its ODE beyond.
class BorelSum {
 public:
  BorelSum(std::shared_ptr<const SeriesModel> model, const RaySpec& ray, const PrecisionContext& ctx,
           double step_fraction = 0.25);

  const SeriesModel& model() const { return *model_; }
  const RaySpec& ray() const { return ray_; }
  const PrecisionContext& context() const { return ctx_; }
  std::size_t dimension() const { return model_->components.size(); }
  // Finite nonzero singular points of the ODE.
  const std::vector<Complex>& singular_points() const { return singular_; }
  // Radius below which values come from direct summation.
  const Real& series_radius() const { return rho1_; }
  // Distance from 0 to the nearest singular point.
  const Real& convergence_radius() const { return radius_; }
  std::size_t center_count() const { return centers_.size(); }

  // Components at tau = rho e^{i angle}.
  std::vector<Complex> value(const Real& rho);
  // Direct summation at any tau inside the disk of convergence.
  std::vector<Complex> series_value(const Complex& tau);

  struct Sample {
    UPoint u;
    std::vector<std::vector<Complex>> values;  // [theta power][component]
    std::vector<Real> errors;                  // per theta power, absolute
    int panels = 0;
  };
  // u int_0^inf e^{-u tau} B(tau) d tau and its theta_u-derivatives below m.
  Sample laplace(const UPoint& u, int m, double panel_scale = 1.0);

 private:
  struct Center {
    Real rho;
    Real h;
    std::vector<std::vector<Complex>> y;  // [component][n]
  };
  Real distance_to_singularity(const Complex& tau) const;
  void build_center(const Real& rho, const std::vector<std::vector<Complex>>& derivs);
  void extend(const Real& rho);
  Complex tau_at(const Real& rho) const;

  std::shared_ptr<const SeriesModel> model_;
  RaySpec ray_;
  PrecisionContext ctx_;
  double step_fraction_;
  mpfr_prec_t bits_;
  NumericSeries series_;
  int order_ = 0;
  std::vector<std::vector<Complex>> p_;  // p_[k][power]: coefficient polynomial of (d/dtau)^k
  std::vector<Complex> singular_;
  Real angle_;
  Complex direction_;
  Real rho1_;
  Real radius_;
  std::vector<Center> centers_;
};

// Value at tau: on the ray by continuation, elsewhere inside the disk by direct summation.
std::vector<Complex> continue_regularized(BorelSum& sum, const Complex& tau);

// Laplace integral via θ_u-weighted moments, with error estimates.
BorelSum::Sample laplace_eval(BorelSum& sum, const UPoint& u, int m);

struct WatsonRow {
  UPoint u;
  long n = 0;
  Real error;      // |I - S_n|
  Real next_term;  // |term_{n+1}|
  bool pass = false;
};

struct WatsonReport {
  std::vector<WatsonRow> rows;
  std::vector<long> optimal_index;  // per sample; argmin of |term_n| over the scanned range
  // per sample; false when the scan stopped below the precision floor before the terms turned
  std::vector<bool> optimal_reached;
  std::vector<long> checked_up_to;  // per sample
  std::vector<Real> sample_error;   // per sample
  bool passed() const;
  void write_csv(std::ostream& os) const;
};

// |I(u) - S_n(u)| <= 2 |term_{n+1}(u)| for n below the optimal truncation and above the precision floor.
// asymptotic: the divergent series, summed in s = sigma u^{-kappa}.
WatsonReport watson_check(BorelSum& numeric, const std::shared_ptr<const SeriesModel>& asymptotic,
                          const std::vector<UPoint>& samples, long max_terms = 20000);

// Known function values at u with absolute errors.
struct WatsonSample {
  UPoint u;
  std::vector<Complex> value;
  Real error;
};
// Same check for values produced elsewhere; the series is summed in s = sigma u^{-kappa}.
WatsonReport watson_check(const std::vector<WatsonSample>& samples, const std::shared_ptr<const SeriesModel>& asymptotic,
                          const Rational& kappa, int sigma, mpfr_prec_t bits, long max_terms = 20000);

// Radius of convergence of a Borel series from ratios of its coefficients, Richardson-extrapolated.
double estimate_radius(const std::shared_ptr<const SeriesModel>& borel, long n_terms, mpfr_prec_t bits = 256);
// Same from an exact Borel-regularized series at a numeric lambda.
double estimate_radius(const QSeries& regularized, const ComplexRational& lambda, long n_terms,
                       mpfr_prec_t bits = 256);

}  // namespace asymcorr
