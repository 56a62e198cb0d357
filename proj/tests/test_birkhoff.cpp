#include <doctest.h>

#include <random>

#include "asymcorr/birkhoff.hpp"
#include "asymcorr/errors.hpp"
#include "fixtures.hpp"

using namespace asymcorr;

namespace {

ZLaurent z_pow(long e, long c = 1) { return ZLaurent::term(Rational(e), LambdaPoly(c)); }

MatrixZSeries scalar_series(std::map<long, ZLaurent> terms, long max_index) {
  MatrixZSeries m;
  m.dim = 1;
  m.max_index = max_index;
  for (auto& [k, v] : terms) {
    ZMatrix t(1);
    t(0, 0) = v;
    m.terms.emplace(k, t);
  }
  return m;
}

MatrixZSeries truncated(const MatrixZSeries& m, long top) {
  MatrixZSeries out = m;
  out.max_index = top;
  for (auto it = out.terms.begin(); it != out.terms.end();) it = it->first > top ? out.terms.erase(it) : std::next(it);
  return out;
}

void check_split(const Factorization& f) {
  for (const auto& [k, jk] : f.j.terms) {
    ZMatrix d = jk;
    if (k == 0) {
      CHECK(jk == ZMatrix::identity(jk.dim));
      continue;
    }
    for (const auto& e : d.data) CHECK_FALSE(e.nonnegative_part().terms().size() > 0);
  }
  for (const auto& [k, yk] : f.y.terms) {
    if (k == 0) CHECK(yk == ZMatrix::identity(yk.dim));
    for (const auto& e : yk.data) CHECK_FALSE(e.has_negative_power());
  }
}

// z sum_n q^n prod_{l=0}^{2n-1} (-2(H+lambda) - l z) / prod_{l=1}^n (H + l z)^3 with q^{H/z} stripped.
ZHPoly display_coefficient(long n) {
  ZHPoly c = ZHPoly::term(1, HPoly(3, LambdaPoly(1)));
  for (long l = 0; l < 2 * n; ++l) c *= ZHPoly::linear(3, -2, -2, Rational(-l));
  for (long l = 1; l <= n; ++l)
    for (int p = 0; p < 3; ++p) c *= ZHPoly::inverse_unit(3, 1, Rational(l));
  return c;
}

ZLaurent component(const ZHPoly& c, int h) {
  ZLaurent out;
  for (const auto& [e, p] : c.parts()) out += ZLaurent::term(e, p[h]);
  return out;
}

struct Section2 {
  GroupData group = test::c3z2();
  ZSeries iy = build_IY_z(group, {20, 0});
  std::vector<BasisEntry> block = SectorBasis::make(group, SpaceTag::Y).block(group, 0);
  std::vector<ZThetaOperator> ops{ZThetaOperator::monomial(0), ZThetaOperator::monomial(1), ZThetaOperator::monomial(2)};
};

}  // namespace

TEST_CASE("Laurent arithmetic and split") {
  ZLaurent a = z_pow(-2, 3) + z_pow(0, 1) + z_pow(1, -2);
  CHECK(a.has_positive_power());
  CHECK(a.has_negative_power());
  CHECK(a.negative_part() + a.nonnegative_part() == a);
  CHECK((a - a).is_zero());
  CHECK(z_pow(1) * z_pow(-1) == z_pow(0));
  CHECK(a.shifted(2).coefficient(0) == LambdaPoly(3));
}

TEST_CASE("factorize worked examples") {
  // identity
  Factorization id = factorize(scalar_series({{0, z_pow(0)}}, 5), 5);
  CHECK(id.j.terms.size() == 1);
  CHECK(id.y.terms.size() == 1);
  // 1 + q (z + 1/z) = (1 + q/z)(1 + q z) + O(q^2)
  MatrixZSeries m = scalar_series({{0, z_pow(0)}, {1, z_pow(1) + z_pow(-1)}}, 1);
  Factorization f = factorize(m, 1);
  CHECK(f.j.at(1)(0, 0) == z_pow(-1));
  CHECK(f.y.at(1)(0, 0) == z_pow(1));
  check_split(f);
  CHECK(f.j * f.y == m);
  // order 2: the q^2 term of J Y is z^0, so the residual -1 lands in Y
  MatrixZSeries m2 = scalar_series({{0, z_pow(0)}, {1, z_pow(1) + z_pow(-1)}}, 2);
  Factorization f2 = factorize(m2, 2);
  CHECK(f2.j * f2.y == m2);
  CHECK(f2.y.at(2)(0, 0) == z_pow(0, -1));
  CHECK(f2.j.at(2).is_zero());
  // order 0 must be the identity
  CHECK_THROWS_WITH_AS(factorize(scalar_series({{0, z_pow(0, 2)}}, 2), 2), doctest::Contains("ObstructedFactorization"),
                       Error);
  CHECK_THROWS_WITH_AS(factorize(m, 3), doctest::Contains("TruncationTooSmall"), Error);
}

TEST_CASE("factorization property: random matrices recompose") {
  std::mt19937 rng(20261014);
  std::uniform_int_distribution<int> coeff(-5, 5), zexp(-3, 3), count(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 3;
    MatrixZSeries m;
    m.dim = n;
    m.max_index = 6;
    m.terms.emplace(0, ZMatrix::identity(n));
    for (long k = 1; k <= 6; ++k) {
      ZMatrix t(n);
      for (auto& e : t.data)
        for (int c = count(rng); c > 0; --c)
          e += ZLaurent::term(Rational(zexp(rng)), LambdaPoly::monomial(coeff(rng), zexp(rng)));
      if (!t.is_zero()) m.terms.emplace(k, t);
    }
    Factorization f = factorize(m, 6);
    check_split(f);
    CHECK(f.j * f.y == m);
  }
}

TEST_CASE("assemble_I_matrix on the blowup block") {
  Section2 s;
  REQUIRE(s.block.size() == 3);
  MatrixZSeries m = assemble_I_matrix(s.iy, s.block, s.ops);
  CHECK(m.at(0) == ZMatrix::identity(3));
  CHECK(m.step == make_rational(1, 2));
  // direct application of z^{-1}(z theta)^i to the displayed series, coefficient of q^n
  for (long n = 1; n <= 4; ++n) {
    ZHPoly c = display_coefficient(n).shifted(-1);
    std::vector<ZHPoly> cols{c};
    for (int i = 1; i < 3; ++i) cols.push_back(cols.back() * ZHPoly::linear(3, 0, 1, Rational(n)));
    ZMatrix mn = m.at(2 * n);
    for (int i = 0; i < 3; ++i)
      for (int h = 0; h < 3; ++h) CHECK(mn(static_cast<std::size_t>(h), static_cast<std::size_t>(i)) == component(cols[i], h));
    CHECK(m.at(2 * n - 1).is_zero());
  }
  // the searched operators agree with the list above
  std::vector<ZThetaOperator> found = search_operators(s.iy, s.block);
  REQUIRE(found.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(found[i].terms.at(0).theta_power == i);
}

TEST_CASE("certificate failures report NotBig") {
  Section2 s;
  std::vector<ZThetaOperator> short_list{ZThetaOperator::monomial(0), ZThetaOperator::monomial(1)};
  CHECK_THROWS_WITH_AS(assemble_I_matrix(s.iy, s.block, short_list), doctest::Contains("NotBig"), Error);
  std::vector<ZThetaOperator> wrong{ZThetaOperator::monomial(0), ZThetaOperator::monomial(2), ZThetaOperator::monomial(1)};
  CHECK_THROWS_WITH_AS(assemble_I_matrix(s.iy, s.block, wrong), doctest::Contains("NotBig"), Error);
  // a block entry the series never reaches at order 0
  std::vector<BasisEntry> twisted{{s.group.jay, 0}};
  CHECK_THROWS_WITH_AS(search_operators(s.iy, twisted), doctest::Contains("NotBig"), Error);
}

TEST_CASE("P = 1 on a J-type input returns the input") {
  ZSeries j;
  j.variable = Variable::q;
  j.space = SpaceTag::Y;
  j.trunc = {3, 0};
  auto put = [&](long k, ZHPoly c) { j.coeffs[{k, {}}].emplace(0, std::move(c)); };
  put(0, ZHPoly::term(1, HPoly(1, LambdaPoly(1))));
  put(1, ZHPoly::term(-1, HPoly(1, LambdaPoly(5))));
  put(3, ZHPoly::term(-2, HPoly(1, LambdaPoly::lambda())));
  std::vector<BasisEntry> block{{0, 0}};
  MatrixZSeries m = assemble_I_matrix(j, block, {ZThetaOperator::monomial(0)});
  CHECK(m.at(1)(0, 0) == ZLaurent::term(-2, LambdaPoly(5)));
  CHECK(m.at(3)(0, 0) == ZLaurent::term(-3, LambdaPoly::lambda()));
  CHECK(m.at(2).is_zero());
}

TEST_CASE("blowup matrix factorizes to order 10") {
  Section2 s;
  MatrixZSeries m = assemble_I_matrix(s.iy, s.block, s.ops);
  Factorization f = factorize(m, 10);
  CHECK(f.j.max_index == 20);
  check_split(f);
  CHECK(f.j * f.y == truncated(m, 20));
  // z J(1) = z + H log q + O(1/z): the unit column of J is the I-function itself
  for (long k = 0; k <= 20; ++k)
    for (std::size_t r = 0; r < 3; ++r) CHECK(f.j.at(k)(r, 0) == m.at(k)(r, 0));
  std::optional<MirrorMap> mm = mirror_map(f, s.block, s.iy.prefactor);
  REQUIRE(mm.has_value());
  CHECK(mm->log_part.h_coeff == 1);
  CHECK(mm->log_part.lambda_coeff == 0);
  CHECK(mm->tau.empty());
  // the Y factor is nontrivial from q^1 on
  CHECK_FALSE(f.y.at(2).is_zero());
  PdeResidual pde = pde_residual(f.j, s.block, s.iy.prefactor);
  CHECK(pde.passed());
  CHECK(pde.verified_to == 20);
  // quantum multiplication by H at q^0 is the classical cup product
  ZMatrix a0 = pde.connection.at(0);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(a0(r, c) == (r == c + 1 ? ZLaurent(LambdaPoly(1)) : ZLaurent()));
}

TEST_CASE("PDE residual detects a perturbed J") {
  Section2 s;
  Factorization f = factorize(assemble_I_matrix(s.iy, s.block, s.ops), 3);
  MatrixZSeries j = f.j;
  j.terms[4](2, 0) += ZLaurent::term(-3, LambdaPoly(1));
  PdeResidual pde = pde_residual(j, s.block, s.iy.prefactor);
  REQUIRE(pde.first_failure.has_value());
  CHECK(*pde.first_failure == 4);
  CHECK(pde.verified_to == 3);
}

TEST_CASE("birkhoff_all per block") {
  std::vector<BirkhoffBlock> blocks = birkhoff_all(test::c3z2(), 4);
  REQUIRE(blocks.size() == 1);
  CHECK_FALSE(blocks[0].not_big.has_value());
  CHECK(blocks[0].recomposes);
  CHECK(blocks[0].pde.passed());
  std::vector<BirkhoffBlock> split = birkhoff_all(test::split_group(), 2);
  CHECK(split.size() == test::split_group().gbar_elements.size());
  for (const BirkhoffBlock& b : split)
    if (!b.not_big) CHECK(b.recomposes);
}
