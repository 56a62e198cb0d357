#include <doctest.h>

#include <cmath>

#include "asymcorr/errors.hpp"
#include "asymcorr/series.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace asymcorr;

namespace {

std::vector<GroupData> all_fixtures() { return {test::c3z2(), test::quartic(), test::split_group()}; }

double eval_at(const LambdaPoly& p, double lambda) {
  double s = 0;
  for (const auto& [e, c] : p.terms()) s += c.get_d() * std::pow(lambda, e);
  return s;
}

}  // namespace

TEST_CASE("quotient-side coefficients") {
  GroupData g = test::c3z2();
  QSeries ix = build_IX(g, {10, 0});
  CHECK(ix.variable == Variable::t);
  CHECK(ix.prefactor.lambda_coeff == 2);
  const Coefficient* c0 = ix.find({0, {}});
  REQUIRE(c0);
  CHECK(c0->value == CohomClass::on_sector(0, HPoly(1, LambdaPoly(1))));
  const Coefficient* c2 = ix.find({2, {}});
  REQUIRE(c2);
  CHECK(c2->value == CohomClass::on_sector(0, HPoly(1, LambdaPoly::monomial(make_rational(-1, 2), 3))));
  // odd powers sit on the twisted sector
  const Coefficient* c1 = ix.find({1, {}});
  REQUIRE(c1);
  CHECK(c1->value.parts().count(g.jay) == 1);

  GroupData s = test::split_group();
  QSeries sx = build_IX(s, {3, 0});
  CHECK(sx.find({1, {0}})->value == CohomClass::on_sector(s.jay, HPoly(1, LambdaPoly(1))));
}

TEST_CASE("blowup-side coefficients") {
  GroupData g = test::c3z2();
  QSeries iy = build_IY(g, {10, 0});
  CHECK(iy.step == Rational(1, 2));
  CHECK(iy.prefactor.h_coeff == 1);
  CHECK(iy.find({0, {}})->value == CohomClass::on_sector(0, HPoly(3, LambdaPoly(1))));
  CHECK(iy.find({1, {}}) == nullptr);  // jay fixes no coordinate
  // q^1: [4(H+lambda)^2 + 2(H+lambda)] (1 - 3H + 6H^2)
  HPoly hl = HPoly::monomial(3, 1) + HPoly(3, LambdaPoly::lambda());
  HPoly expect = (hl * hl * LambdaPoly(4) + hl * LambdaPoly(2));
  HPoly series(3, LambdaPoly(1));
  series[1] = LambdaPoly(-3);
  series[2] = LambdaPoly(6);
  expect *= series;
  CHECK(iy.find({2, {}})->value == CohomClass::on_sector(0, expect));
}

TEST_CASE("gamma-ratio and raw-product forms agree") {
  for (const auto& g : all_fixtures()) {
    Truncation tr{30, g.gbar_generators.empty() ? 0 : 3};
    CHECK(build_IX(g, tr) == build_IX_modification(g, tr));
    CHECK(build_IY(g, tr) == build_IY_product(g, tr));
  }
}

TEST_CASE("truncation guard") {
  CHECK_THROWS_WITH_AS(build_IX(test::c3z2(), {0, 0}), doctest::Contains("TruncationTooSmall"), Error);
}

TEST_CASE("blowup-side series is entire") {
  QSeries iy = build_IY(test::c3z2(), {120, 0});
  std::vector<double> ratios;
  for (long k0 = 2; k0 + 2 <= 120; k0 += 2) {
    double a = std::abs(eval_at(iy.find({k0, {}})->value.component({0, 0}), 3.5));
    double b = std::abs(eval_at(iy.find({k0 + 2, {}})->value.component({0, 0}), 3.5));
    ratios.push_back(b / a);
  }
  // ratio ~ 4/n -> 0
  CHECK(ratios.back() < 0.1);
  CHECK(ratios.back() < ratios[ratios.size() / 2]);
}

TEST_CASE("regularization") {
  GroupData g = test::c3z2();
  QSeries reg = regularize(build_IX(g, {20, 0}), g);
  CHECK(reg.variable == Variable::tau);
  CHECK(reg.step == Rational(1, 2));
  CHECK(reg.prefactor.lambda_coeff == 1);
  const Coefficient* c0 = reg.find({0, {}});
  REQUIRE(c0->inv_gamma);
  CHECK(c0->inv_gamma->arg == LinearForm{1, 1, 0});
  // k0 = 2m + k: Gamma(1 + m + k/2 + lambda)
  CHECK(reg.find({5, {}})->inv_gamma->arg == LinearForm{make_rational(7, 2), 1, 0});
}

TEST_CASE("FJRW transform matches the closed form") {
  for (const auto& g : all_fixtures()) {
    int kmax = g.gbar_generators.empty() ? 0 : 2;
    QSeries ix = build_IX(g, {41, kmax});
    QSeries w = mlk_transform(ix, g);
    for (const auto& kbar : multi_indices(g.gbar_generators.size(), kmax)) {
      auto a = weighted_multiplicities(g, kbar);
      auto oracle = test::fjrw_closed_form(g, a, 41);
      Rational kf = 1;
      for (int k : kbar) kf *= factorial(k);
      for (long key = 0; key <= 41; ++key) {
        const Coefficient* c = w.find({key, kbar});
        auto it = oracle.find(key);
        if (it == oracle.end()) {
          CHECK((c == nullptr || c->value.is_zero()));
          continue;
        }
        REQUIRE(c);
        CHECK(c->value == CohomClass::on_sector(it->second.sector, it->second.value * LambdaPoly(1 / kf)));
      }
      // slice route agrees with the series route
      Slice sl = fjrw_slice(g, a, 41);
      for (const auto& t : sl.terms) {
        CHECK(w.find({t.k0, kbar})->value ==
              CohomClass::on_sector(t.sector, t.factors.expand(1) * LambdaPoly(1 / kf)));
      }
    }
    // support on narrow sectors only
    for (const auto& [key, c] : w.coeffs)
      for (const auto& [sector, p] : c.value.parts()) CHECK(g.narrow[sector]);
  }
}

TEST_CASE("FJRW strict age policy") {
  GroupData q = test::quartic();
  QSeries ix = build_IX(q, {8, 0});
  CHECK_THROWS_WITH_AS(mlk_transform(ix, q, AgeSignPolicy::Strict), doctest::Contains("NonIntegerAgeSign"), Error);
}

TEST_CASE("hypersurface transform matches the closed form") {
  for (const auto& g : all_fixtures()) {
    int kmax = g.gbar_generators.empty() ? 0 : 2;
    QSeries iy = build_IY(g, {40, kmax});
    QSeries z = qsd_transform(iy, g);
    QSeries zl = qsd_transform_laurent(iy, g);
    for (const auto& kbar : multi_indices(g.gbar_generators.size(), kmax)) {
      auto a = weighted_multiplicities(g, kbar);
      auto oracle = test::z_closed_form(g, a, 40);
      Rational kf = 1;
      for (int k : kbar) kf *= factorial(k);
      for (long key = 0; key <= 40; ++key) {
        const Coefficient* c = z.find({key, kbar});
        auto it = oracle.find(key);
        if (it == oracle.end()) {
          CHECK((c == nullptr || c->value.is_zero()));
          continue;
        }
        REQUIRE(c);
        CohomClass expect = CohomClass::on_sector(it->second.sector, it->second.value * LambdaPoly(1 / kf));
        CHECK(c->value == expect);
        if (key > 0) {
          const Coefficient* cl = zl.find({key, kbar});
          REQUIRE(cl);
          CHECK(cl->value == expect);
        }
      }
    }
    for (const auto& [key, c] : z.coeffs)
      for (const auto& [sector, p] : c.value.parts())
        CHECK(p.nil() == static_cast<int>(g.elements[sector].fixed_count()) - 1);
  }
}
