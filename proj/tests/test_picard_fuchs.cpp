#include <doctest.h>

#include <chrono>
#include <random>

#include "asymcorr/errors.hpp"
#include "asymcorr/picard_fuchs.hpp"
#include "fixtures.hpp"

using namespace asymcorr;

namespace {

const LambdaPoly lam = LambdaPoly::lambda();

ThetaPoly lin(const Rational& alpha, const LambdaPoly& beta) { return ThetaPoly::linear(alpha, beta); }

ThetaOperator random_operator(std::mt19937& rng, Variable v) {
  std::uniform_int_distribution<int> coeff(-3, 3), deg(0, 2), power(0, 2);
  ThetaOperator op(v);
  for (int i = 0; i < 3; ++i) {
    ThetaPoly p;
    ThetaPoly mono(LambdaPoly(1));
    for (int k = 0; k <= deg(rng); ++k) {
      p += mono * ThetaPoly(LambdaPoly(coeff(rng)) + LambdaPoly::monomial(coeff(rng), 1));
      mono *= ThetaPoly::theta();
    }
    op += ThetaOperator::monomial(v, Rational(power(rng)), p);
  }
  return op;
}

std::vector<Rational> zero_a(const GroupData& g) { return std::vector<Rational>(g.input.n(), Rational(0)); }

}  // namespace

TEST_CASE("operator algebra") {
  std::mt19937 rng(2024);
  QSeries iy = build_IY(test::c3z2(), {24, 0});
  for (int trial = 0; trial < 20; ++trial) {
    ThetaOperator a = random_operator(rng, Variable::q);
    ThetaOperator b = random_operator(rng, Variable::q);
    ThetaOperator c = random_operator(rng, Variable::q);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    QSeries lhs = apply(a * b, iy);
    QSeries rhs = apply(a, apply(b, iy));
    for (const auto& [key, v] : lhs.coeffs) {
      if (key.k0 > 24) continue;
      const Coefficient* other = rhs.find(key);
      CHECK((other ? other->value == v.value : v.value.is_zero()));
    }
  }
  // theta v = v (theta + 1)
  ThetaOperator th = ThetaOperator::monomial(Variable::q, 0, ThetaPoly::theta());
  ThetaOperator v = ThetaOperator::monomial(Variable::q, 1, ThetaPoly(LambdaPoly(1)));
  CHECK(th * v == ThetaOperator::monomial(Variable::q, 1, lin(1, LambdaPoly(1))));
  CHECK(apply(ThetaOperator(Variable::q), iy).coeffs.empty());
}

TEST_CASE("regularized operator annihilates the regularized series") {
  auto start = std::chrono::steady_clock::now();
  GroupData g = test::c3z2();
  ThetaOperator op = build_regularized_pf(g, zero_a(g));
  // tau theta^3 + (2 theta - 2 lambda)(2 theta - 2 lambda - 1) theta, up to sign
  ThetaOperator display = ThetaOperator::monomial(Variable::tau, 1, ThetaPoly::theta() * ThetaPoly::theta() * ThetaPoly::theta()) +
                          ThetaOperator::monomial(Variable::tau, 0,
                                                  lin(2, lam * Rational(-2)) * lin(2, lam * Rational(-2) - LambdaPoly(1)) *
                                                      ThetaPoly::theta());
  CHECK(op == display.scaled(LambdaPoly(-1)));
  QSeries reg = regularize(build_IX(g, {60, 0}), g);
  CHECK(check_annihilation(op, reg));
  // a wrong lambda shift is detected
  ThetaOperator wrong = ThetaOperator::monomial(Variable::tau, 1, ThetaPoly::theta() * ThetaPoly::theta() * ThetaPoly::theta()) +
                        ThetaOperator::monomial(Variable::tau, 0, lin(2, lam * Rational(-2)) * lin(2, lam * Rational(-2)) *
                                                                    ThetaPoly::theta());
  CHECK_FALSE(check_annihilation(wrong, reg));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
}

TEST_CASE("blowup operator") {
  GroupData g = test::c3z2();
  ThetaOperator op = build_pf_Y(g, zero_a(g));
  ThetaOperator display = ThetaOperator::monomial(Variable::q, 0, ThetaPoly::theta() * ThetaPoly::theta() * ThetaPoly::theta()) -
                          ThetaOperator::monomial(Variable::q, 1,
                                                  lin(-2, lam * Rational(-2)) * lin(-2, lam * Rational(-2) - LambdaPoly(1)));
  CHECK(op == display);
  CHECK(op.to_string() == display.to_string());
  CHECK(op.order() == 3);
  CHECK(check_annihilation(op, build_IY(g, {30, 0})));

  GroupData q = test::quartic();
  ThetaOperator oq = build_pf_Y(q, zero_a(q));
  // r < 0: the q-term has degree d > sum c_j
  CHECK(oq.order() == 4);
  CHECK(check_annihilation(oq, build_IY(q, {30, 0})));
  // X-side operator order d
  CHECK(build_pf_X(q, zero_a(q)).order() == 4);
  CHECK(check_annihilation(build_pf_X(q, zero_a(q)), build_IX(q, {30, 0})));

  GroupData s = test::split_group();
  QSeries iy = build_IY(s, {30, 3});
  QSeries ix = build_IX(s, {30, 3});
  for (const auto& kbar : multi_indices(s.gbar_generators.size(), 3)) {
    auto a = weighted_multiplicities(s, kbar);
    CHECK(check_annihilation(build_pf_Y(s, a), iy.restricted_to(kbar)));
    CHECK(check_annihilation(build_pf_X(s, a), ix.restricted_to(kbar)));
  }
}

TEST_CASE("lowering identity") {
  GroupData s = test::split_group();
  for (int k = 0; k <= 4; ++k) {
    auto a = weighted_multiplicities(s, {k});
    std::vector<Rational> m = s.elements[s.index_of_reduced(a)].multiplicities();
    QSeries base = series_from_slice(y_slice(s, m, 30), s, 30);
    QSeries target = series_from_slice(y_slice(s, a, 30), s, 30);
    QSeries lowered = apply(lowering_operator(s, a), base);
    for (long k0 = 0; k0 <= 30; ++k0) {
      const Coefficient* x = lowered.find({k0, {}});
      const Coefficient* y = target.find({k0, {}});
      bool xz = !x || x->value.is_zero();
      bool yz = !y || y->value.is_zero();
      CHECK(xz == yz);
      if (!xz && !yz) CHECK(x->value == y->value);
    }
  }
}

TEST_CASE("singular locus") {
  GroupData g = test::c3z2();
  SingularLocus sl = singular_locus(build_regularized_pf(g, zero_a(g)));
  CHECK(sl.power == 1);
  REQUIRE(sl.exact_points().size() == 1);
  CHECK(sl.exact_points()[0] == -4);
  CHECK(sl.to_string() == "{0, inf} + {tau: tau = -4/1}");
  // blowup side has no finite nonzero singular point
  CHECK(singular_locus(build_pf_Y(g, zero_a(g))).power == 0);
}

TEST_CASE("Laplace and Borel conjugation") {
  for (const auto& g : {test::c3z2()}) {
    ThetaOperator reg = build_regularized_pf(g, zero_a(g));
    ThetaOperator u_op = laplace_conjugate(reg);
    Rational r(g.r);
    CHECK(change_variable(u_op, Variable::q, 1 / r) == build_pf_Y(g, zero_a(g)));
    CHECK(borel_conjugate(u_op) == reg);
    CHECK(borel_ode(build_pf_X(g, zero_a(g)), r / g.input.d, 1) == reg.scaled(LambdaPoly(-1)));
  }
  ThetaOperator id = ThetaOperator::monomial(Variable::tau, 0, ThetaPoly(LambdaPoly(1)));
  CHECK(laplace_conjugate(id) == ThetaOperator::monomial(Variable::u, 0, ThetaPoly(LambdaPoly(1))));
  ThetaOperator bad = ThetaOperator::monomial(Variable::tau, 1, ThetaPoly(LambdaPoly(1))) +
                      ThetaOperator::monomial(Variable::tau, 0, lin(1, LambdaPoly(1)));
  CHECK_THROWS_WITH_AS(laplace_conjugate(bad), doctest::Contains("NotInLaplaceNormalForm"), Error);
  CHECK_THROWS_WITH_AS(apply(bad, build_IY(test::c3z2(), {4, 0})), doctest::Contains("VariableMismatch"), Error);
}

TEST_CASE("factorization of the nonequivariant operator") {
  GroupData conic = test::c3z2();
  ThetaOperator d = build_D_t(conic, 0);
  ThetaOperator expect = ThetaOperator::monomial(Variable::t, 0, ThetaPoly::theta() * lin(1, LambdaPoly(-1))) +
                         ThetaOperator::monomial(Variable::t, 2,
                                                 (ThetaPoly::theta() * ThetaPoly::theta() * ThetaPoly::theta()) *
                                                     ThetaPoly(LambdaPoly(make_rational(1, 8))));
  CHECK(d == expect);
  PFFactorization f = factor_pf(d, conic, 0);
  CHECK(f.left.empty());
  CHECK(f.irr == ThetaOperator::monomial(Variable::t, 0, lin(1, LambdaPoly(-1))) +
                     ThetaOperator::monomial(Variable::t, 2, ThetaPoly::theta() * ThetaPoly::theta() *
                                                                 ThetaPoly(LambdaPoly(make_rational(1, 8)))));
  CHECK(verify_on_monomials(d, f, 40));

  for (const auto& g : {test::quartic(), test::split_group()}) {
    for (std::size_t gb : g.gbar_elements) {
      ThetaOperator dg = build_D_t(g, gb);
      PFFactorization fg = factor_pf(dg, g, gb);
      CHECK(fg.compose() == dg);
      CHECK(verify_on_monomials(dg, fg, 40));
      std::size_t fixing = 0;
      for (long k = 1; k < g.input.d; ++k)
        if (g.elements[g.jay_times(k, gb)].fixed_count() > 0) ++fixing;
      CHECK(fg.left.size() == fixing);
      CHECK(fg.irr.order() == static_cast<int>(SectorBasis::make(g, SpaceTag::FJRW).block(g, gb).size()));
    }
  }
  GroupData s = test::split_group();
  CHECK(factor_pf(build_D_t(s, 0), s, 0).left == std::vector<long>{2});
  // a factor that does not divide is reported
  ThetaOperator broken = d + ThetaOperator::monomial(Variable::t, 0, ThetaPoly(LambdaPoly(1)));
  CHECK_THROWS_WITH_AS(factor_pf(broken, conic, 0), doctest::Contains("FactorMismatch"), Error);
}

TEST_CASE("reduced operators annihilate the LG-side series") {
  for (const auto& g : {test::c3z2(), test::quartic(), test::split_group()}) {
    int kmax = g.gbar_generators.empty() ? 0 : 2;
    QSeries w = mlk_transform(build_IX(g, {40, kmax}), g);
    QSeries z = qsd_transform(build_IY(g, {40, kmax}), g);
    for (const auto& kbar : multi_indices(g.gbar_generators.size(), kmax)) {
      std::size_t gb = g.coset_of[g.index_of_reduced(weighted_multiplicities(g, kbar))];
      if (weighted_multiplicities(g, kbar) != g.elements[gb].multiplicities()) continue;
      PFFactorization f = factor_pf(build_D_t(g, gb), g, gb);
      CHECK(check_annihilation(f.irr, w.restricted_to(kbar)));
      // q = (-t)^{-d}
      ThetaOperator dq = change_variable(f.irr, Variable::q, Rational(-1) / g.input.d, -1);
      dq = dq.left_shift(-dq.min_power());
      CHECK(check_annihilation(dq, z.restricted_to(kbar)));
      if (g.r != 0) {
        ThetaOperator dq_pos = change_variable(f.irr, Variable::q, Rational(1) / g.input.d, -1);
        CHECK_FALSE(check_annihilation(dq_pos, z.restricted_to(kbar)));
      }
    }
  }
}
