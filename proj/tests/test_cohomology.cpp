#include <doctest.h>

#include <random>

#include "asymcorr/cohomology.hpp"
#include "asymcorr/errors.hpp"
#include "fixtures.hpp"

using namespace asymcorr;

namespace {

LambdaPoly random_lambda_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> coeff(-5, 5), den(1, 4), expo(-2, 3), count(0, 3);
  LambdaPoly p;
  for (int i = count(rng); i > 0; --i) p += LambdaPoly::monomial(make_rational(coeff(rng), den(rng)), expo(rng));
  return p;
}

HPoly random_hpoly(std::mt19937& rng, int nil) {
  HPoly p(nil);
  for (int i = 0; i < nil; ++i) p[i] = random_lambda_poly(rng);
  return p;
}

const LinearForm lam{0, 1, 0};

}  // namespace

TEST_CASE("lambda polynomial arithmetic") {
  LambdaPoly l = LambdaPoly::lambda();
  LambdaPoly p = l * l - LambdaPoly(3) * l + LambdaPoly(2);
  CHECK(p.coefficient(2) == 1);
  CHECK(p.coefficient(1) == -3);
  CHECK(p.at_zero() == 2);
  LambdaPoly inv = LambdaPoly::monomial(1, -1);
  CHECK((inv * l) == LambdaPoly(1));
  CHECK_FALSE((p * inv).has_limit_at_zero());
  CHECK_THROWS_WITH_AS((p * inv).at_zero(), doctest::Contains("LambdaLimitUndefined"), Error);
  CHECK((p - p).is_zero());
}

TEST_CASE("ring axioms on random classes") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    int nil = 1 + trial % 4;
    HPoly a = random_hpoly(rng, nil), b = random_hpoly(rng, nil), c = random_hpoly(rng, nil);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    LambdaPoly s = random_lambda_poly(rng);
    CohomClass x = CohomClass::on_sector(0, a) + CohomClass::on_sector(1, b);
    CohomClass y = CohomClass::on_sector(1, c);
    CHECK((x + y) * s == x * s + y * s);
    CHECK((x - x).is_zero());
  }
}

TEST_CASE("H is nilpotent per sector") {
  HPoly h = HPoly::monomial(3, 1);
  CHECK_FALSE((h * h).is_zero());
  CHECK((h * h * h).is_zero());
  HPoly h1 = HPoly::monomial(1, 1);
  CHECK(h1.is_zero());
}

TEST_CASE("inverse of unit forms") {
  for (int nil = 1; nil <= 4; ++nil) {
    LinearForm f{make_rational(3, 2), 0, 2};
    CHECK(f.to_hpoly(nil) * invert_form(f, nil) == HPoly(nil, LambdaPoly(1)));
    LinearForm g{0, -2, -2};
    CHECK(g.to_hpoly(nil) * invert_form(g, nil) == HPoly(nil, LambdaPoly(1)));
  }
  CHECK_THROWS_WITH_AS(invert_form({0, 0, 1}, 2), doctest::Contains("NonInvertible"), Error);
  CHECK_THROWS_WITH_AS(invert_form({1, 1, 0}, 2), doctest::Contains("NonInvertible"), Error);
}

TEST_CASE("gamma ratio reduction") {
  CHECK(gamma_ratio(lam * Rational(-1), 0).expand(1) == HPoly(1, LambdaPoly(1)));
  CHECK(gamma_ratio(lam * Rational(-1), 1).expand(1) == HPoly(1, -LambdaPoly::lambda()));
  // (-lambda)^3 from three coordinates
  HPoly cube(1, LambdaPoly(1));
  for (int j = 0; j < 3; ++j) cube *= gamma_ratio(lam * Rational(-1), 1).expand(1);
  CHECK(cube == HPoly(1, LambdaPoly::monomial(-1, 3)));
  // x = -2(H + lambda), n = 2 gives x (x - 1)
  LinearForm x{0, -2, -2};
  HPoly expect = x.to_hpoly(3) * (x - Rational(1)).to_hpoly(3);
  CHECK(gamma_ratio(x, 2).expand(3) == expect);

  // functional-equation coherence: ratio(x, n + m) = ratio(x, n) * ratio(x - n, m)
  std::vector<LinearForm> forms = {{make_rational(1, 3), 0, 1}, {make_rational(-5, 2), 0, 3}, {0, -1, 0},
                                   {make_rational(7, 4), -2, 0}};
  for (const auto& f : forms) {
    for (long n = -3; n <= 3; ++n)
      for (long m = -3; m <= 3; ++m) {
        int nil = 3;
        bool lambda_form = f.lambda_slope != 0;
        if (lambda_form && (n + m < 0 || n < 0 || m < 0)) continue;  // reciprocal of non-unit
        HPoly lhs = gamma_ratio(f, n + m).expand(nil);
        HPoly rhs = gamma_ratio(f, n).expand(nil) * gamma_ratio(f - Rational(n), m).expand(nil);
        CHECK(lhs == rhs);
      }
  }
  CHECK_THROWS_WITH_AS(gamma_quotient({make_rational(1, 2), 0, 1}, {0, 0, 1}), doctest::Contains("NonIntegerOffset"),
                       Error);
  CHECK_THROWS_WITH_AS(gamma_ratio({-1, 0, 1}, -1).expand(2), doctest::Contains("NonInvertible"), Error);
}

TEST_CASE("factor cancellation and lambda limit") {
  LinearFactorProduct p;
  p.multiply({0, 0, 1});
  p.divide({0, -2, -2});
  CHECK_FALSE(p.expand(3)[1].has_limit_at_zero());
  LinearFactorProduct lim = p.lambda_limit();
  CHECK(lim.expand(3) == HPoly(3, LambdaPoly(make_rational(-1, 2))));

  LinearFactorProduct q;
  q.multiply({0, -2, -2});
  q.multiply({-1, -2, -2});
  q.divide({0, -2, -2});
  q.cancel();
  CHECK(q.numer().size() == 1);
  CHECK(q.denom().empty());

  LinearFactorProduct bad;
  bad.divide({0, 1, 0});
  CHECK_THROWS_WITH_AS(bad.lambda_limit(), doctest::Contains("LambdaLimitUndefined"), Error);
}

TEST_CASE("gamma factor lifting") {
  GammaFactor a{{make_rational(3, 2), 1, 0}};
  GammaFactor b{{make_rational(7, 2), 1, 0}};
  CHECK(a.residue() == Rational(1, 2));
  CHECK(a.shift() == 1);
  CHECK(a.compatible(b));
  // 1/Gamma(x) = x (x + 1) / Gamma(x + 2)
  LinearFactorProduct p = a.lift_to(b);
  HPoly expect = a.arg.to_hpoly(1) * (a.arg + Rational(1)).to_hpoly(1);
  CHECK(p.expand(1) == expect);
  CHECK_FALSE(a.compatible(GammaFactor{{make_rational(3, 2), 2, 0}}));
}

TEST_CASE("sector bases and block dimensions") {
  for (auto g : {test::c3z2(), test::quartic(), test::split_group()}) {
    SectorBasis x = SectorBasis::make(g, SpaceTag::X);
    SectorBasis y = SectorBasis::make(g, SpaceTag::Y);
    SectorBasis z = SectorBasis::make(g, SpaceTag::Z);
    SectorBasis w = SectorBasis::make(g, SpaceTag::FJRW);
    for (std::size_t gb : g.gbar_elements) {
      CHECK(x.block(g, gb).size() == static_cast<std::size_t>(g.input.d));
      CHECK(y.block(g, gb).size() == static_cast<std::size_t>(g.input.sum_c()));
      std::size_t fixing = 0;
      for (long k = 0; k < g.input.d; ++k)
        if (g.elements[g.jay_times(k, gb)].fixed_count() > 0) ++fixing;
      CHECK(z.block(g, gb).size() == y.block(g, gb).size() - fixing);
      CHECK(w.block(g, gb).size() == x.block(g, gb).size() - fixing);
    }
    for (const auto& e : w.entries()) {
      CHECK(e.h_power == 0);
      CHECK(g.narrow[e.sector]);
    }
  }
  GroupData q = test::quartic();
  SectorBasis w = SectorBasis::make(q, SpaceTag::FJRW);
  CHECK(w.entries().size() == 3);
  CHECK(w.phase(q.jay) == Rational(3, 4));
}
