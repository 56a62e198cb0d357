#include <doctest.h>

#include "asymcorr/errors.hpp"
#include "asymcorr/numeric_series.hpp"
#include "fixtures.hpp"

using namespace asymcorr;

namespace {

Real rel(const Complex& a, const Complex& b) { return abs(a - b) / abs(b); }

const ComplexRational kLambda{make_rational(7, 2), make_rational(1, 5)};

Slice exact_slice(const GroupData& g, SpaceTag space, long max_k0) {
  std::vector<Rational> a = coset_multiplicities(g, 0);
  switch (space) {
    case SpaceTag::X: return x_slice(g, a, max_k0);
    case SpaceTag::Y: return y_slice(g, a, max_k0);
    case SpaceTag::FJRW: return fjrw_slice(g, a, max_k0);
    case SpaceTag::Z: return z_slice(g, a, max_k0);
  }
  return {};
}

}  // namespace

TEST_CASE("gamma function identities") {
  PrecisionScope scope(300);
  Real tol = ldexp(Real(1), -280);
  for (const Complex& z : {Complex(Real(make_rational(7, 2)), Real(make_rational(1, 5))), Complex(Real(0.3), Real(-2)),
                           Complex(Real(-2.5), Real(0.75)), Complex(Real(40), Real(3))}) {
    // 1/Gamma(z) = z / Gamma(z + 1)
    CHECK(rel(rgamma(z), z * rgamma(z + Complex(1))) < tol * Real(100));
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    Complex pz = z * Complex(pi());
    Complex s = (exp(pz * Complex(Real(0), Real(1))) - exp(pz * Complex(Real(0), Real(-1)))) /
                Complex(Real(0), Real(2));
    CHECK(rel(rgamma(z) * rgamma(Complex(1) - z), s / Complex(pi())) < tol * Real(1000));
  }
  CHECK(rel(inverse(rgamma(Complex(Real(0.5)))), Complex(sqrt(pi()))) < tol);
  CHECK(rgamma(Complex(-3)).is_zero());
  // d/de 1/Gamma(1 + e) at 0 is Euler's constant
  Jet j = rgamma_jet(Complex(1), 3);
  Real gamma_e;
  mpfr_const_euler(gamma_e.get(), MPFR_RNDN);
  CHECK(rel(j[1], Complex(gamma_e)) < tol);
}

TEST_CASE("numeric recurrence reproduces the exact factor form") {
  PrecisionScope scope(300);
  Real tol = ldexp(Real(1), -250);
  for (const GroupData& g : {test::c3z2(), test::quartic()}) {
    for (SpaceTag space : {SpaceTag::X, SpaceTag::Y, SpaceTag::FJRW, SpaceTag::Z}) {
      auto model = series_model(g, space, 0, kLambda);
      NumericSeries recurrence(model, 300);
      auto exact_model = std::make_shared<SeriesModel>(*model);
      exact_model->head = exact_slice(g, space, 30).terms;
      exact_model->head_max_k0 = 30;
      NumericSeries exact(exact_model, 300);
      for (long k = 0; k <= 30; ++k) {
        const NumericTerm* a = recurrence.term(k);
        const NumericTerm* b = exact.term(k);
        REQUIRE((a == nullptr) == (b == nullptr));
        if (!a) continue;
        CHECK((a->c - b->c).mag() <= tol * b->c.mag());
      }
    }
  }
}

TEST_CASE("Borel coefficients: recurrence against direct gamma division") {
  PrecisionScope scope(300);
  Real tol = ldexp(Real(1), -250);
  GroupData g = test::c3z2();
  struct Case {
    SpaceTag space;
    Rational kappa;
    int sigma;
  };
  for (const Case& c : {Case{SpaceTag::X, make_rational(1, 2), 1}, Case{SpaceTag::FJRW, make_rational(1, 2), -1}}) {
    auto base = series_model(g, c.space, 0, kLambda);
    auto borel = borel_model(base, c.kappa, c.sigma);
    NumericSeries nb(borel, 300);
    NumericSeries ns(base, 300);
    for (long k : {3L, 20L, 41L, 60L}) {
      const NumericTerm* b = nb.term(k);
      const NumericTerm* a = ns.term(k);
      REQUIRE((a == nullptr) == (b == nullptr));
      if (!a) continue;
      int n = a->c.size();
      Jet e = nb.exponent(k, n);
      Jet direct = a->c * rgamma_jet(Complex(1) + e[0], n).scaled(Complex(Real(borel->h_coeff)));
      if (c.sigma == -1 && k % 2 != 0) direct = -direct;
      CHECK((b->c - direct).mag() <= tol * direct.mag());
    }
  }
}

TEST_CASE("convergent evaluation") {
  PrecisionScope scope(256);
  GroupData g = test::c3z2();
  auto model = series_model(g, SpaceTag::Y, 0, kLambda);
  // theta f at v from a central difference in log v
  Complex lv(Real(2), Real(make_rational(1, 3)));
  Real h = ldexp(Real(1), -40);
  auto at = [&](const Complex& x) { return evaluate_convergent(model, [x] { return x; }, 1, 256)[0]; };
  auto d = evaluate_convergent(model, [lv] { return lv; }, 2, 256);
  auto plus = at(lv + Complex(h)), minus = at(lv - Complex(h));
  for (std::size_t c = 0; c < model->components.size(); ++c) {
    Complex fd = (plus[c] - minus[c]) * Complex(Real(1) / ldexp(h, 1));
    CHECK(rel(fd, d[1][c]) < Real(1e-20));
  }
  CHECK_THROWS_AS(borel_model(series_model(g, SpaceTag::Y, 0, kLambda), make_rational(1, 2), -1), Error);
}
