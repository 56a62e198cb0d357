#include <doctest.h>

#include <set>

#include "asymcorr/errors.hpp"
#include "asymcorr/group.hpp"
#include "fixtures.hpp"

using namespace asymcorr;

namespace {

GroupElement elem(std::initializer_list<const char*> m) {
  std::vector<Rational> v;
  for (const char* s : m) v.push_back(parse_rational(s));
  return GroupElement(v);
}

void check_group_axioms(const GroupData& g) {
  std::set<GroupElement> all(g.elements.begin(), g.elements.end());
  CHECK(all.size() == g.elements.size());
  CHECK(g.elements[0].is_identity());
  long lcm = 1;
  for (long c : g.input.c) lcm = lcm_long(lcm, g.input.d / c);
  for (const auto& a : g.elements) {
    CHECK(all.count(-a) == 1);
    for (const auto& b : g.elements) CHECK(all.count(a + b) == 1);
    CHECK(a.times(lcm).is_identity());
  }
  // (k, gbar) -> jay^k gbar is a bijection
  std::set<GroupElement> image;
  for (long k = 0; k < g.input.d; ++k)
    for (std::size_t gb : g.gbar_elements) image.insert(g.elements[g.jay].times(k) + g.elements[gb]);
  CHECK(image == all);
  CHECK(g.elements.size() == static_cast<std::size_t>(g.input.d) * g.gbar_elements.size());
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    CHECK(g.elements[g.jay].times(g.jay_power[i]) + g.elements[g.coset_of[i]] == g.elements[i]);
    CHECK(g.narrow[i] == ((g.elements[i] + g.elements[g.jay]).fixed_count() == 0));
  }
  for (const auto& gen : g.gbar_generators) CHECK(gen[0] == 0);
}

}  // namespace

TEST_CASE("fermat input validation") {
  CHECK_NOTHROW(make_fermat_input(4, {1, 1, 2}));
  CHECK_THROWS_AS(make_fermat_input(4, {1, 3}), Error);
  CHECK_THROWS_AS(make_fermat_input(4, {2, 2}), Error);
  CHECK_THROWS_AS(make_fermat_input(0, {1}), Error);
  CHECK(make_fermat_input(2, {1, 1, 1}).r() == 1);
  CHECK(make_fermat_input(4, {1, 1, 1}).r() == -1);
}

TEST_CASE("diagonal Z2 action on C^3") {
  GroupData g = test::c3z2();
  CHECK(g.order() == 2);
  CHECK(g.gbar_generators.empty());
  CHECK(g.gbar_elements.size() == 1);
  CHECK(g.r == 1);
  CHECK(g.disc_sign == 1);
  CHECK(g.elements[g.jay] == elem({"1/2", "1/2", "1/2"}));
  CHECK(age(g.elements[g.jay]) == Rational(3, 2));
  CHECK(age(g.elements[0]) == 0);
  check_group_axioms(g);
  // only the identity is narrow: jay * jay = id fixes everything
  CHECK(g.narrow[0]);
  CHECK_FALSE(g.narrow[g.jay]);
}

TEST_CASE("cyclic group generated by jay") {
  for (auto [d, c] : std::vector<std::pair<long, std::vector<long>>>{
           {2, {1, 1, 1}}, {4, {1, 1, 1}}, {4, {1, 1, 2, 1}}, {6, {1, 2, 3, 1}}, {5, {1, 1, 1, 1, 1, 1}}}) {
    GroupData g = enumerate_group(make_fermat_input(d, c), {});
    CHECK(g.order() == static_cast<std::size_t>(d));
    CHECK(g.gbar_elements.size() == 1);
    check_group_axioms(g);
  }
}

TEST_CASE("quartic narrow sectors") {
  GroupData g = test::quartic();
  CHECK(g.r == -1);
  CHECK(g.disc_sign == -1);
  for (std::size_t i = 0; i < g.order(); ++i) CHECK(g.narrow[i] == (g.jay_power[i] != 3));
  check_group_axioms(g);
}

TEST_CASE("split group against brute-force closure") {
  GroupData g = test::split_group();
  CHECK(g.order() == 8);
  CHECK(g.r == 0);
  REQUIRE(g.gbar_generators.size() == 1);
  CHECK(g.gbar_generators[0] == elem({"0", "1/2", "1/2"}));
  CHECK(age(g.gbar_generators[0]) == 1);
  check_group_axioms(g);

  GroupElement gen = elem({"1/4", "3/4", "0"});
  GroupElement jay = elem({"1/4", "1/4", "1/2"});
  std::set<GroupElement> brute;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) brute.insert(gen.times(a) + jay.times(b));
  CHECK(brute == std::set<GroupElement>(g.elements.begin(), g.elements.end()));

  // exhaustive splitting search: every element has exactly one (k, gbar) decomposition
  for (const auto& x : g.elements) {
    int count = 0;
    for (long k = 0; k < 4; ++k)
      for (std::size_t gb : g.gbar_elements)
        if (jay.times(k) + g.elements[gb] == x) ++count;
    CHECK(count == 1);
  }
}

TEST_CASE("group errors") {
  CHECK_THROWS_WITH_AS(enumerate_group(make_fermat_input(3, {1, 1, 1}), {}), doctest::Contains("CrepantInput"), Error);
  auto in = make_fermat_input(4, {1, 1, 2});
  CHECK_THROWS_WITH_AS(enumerate_group(in, {}), doctest::Contains("CrepantInput"), Error);
  CHECK_THROWS_WITH_AS(enumerate_group(in, {elem({"0", "1/2", "1/4"})}, true), doctest::Contains("InvalidMultiplicity"),
                       Error);
  CHECK_THROWS_WITH_AS(enumerate_group(in, {elem({"1/8", "0", "0"})}, true), doctest::Contains("InvalidMultiplicity"),
                       Error);
  // a generator that is a power of jay normalizes to the identity and is dropped
  GroupData g = enumerate_group(in, {elem({"1/2", "1/2", "0"})}, true);
  CHECK(g.order() == 4);
}

TEST_CASE("weighted multiplicities") {
  GroupData g = test::split_group();
  CHECK(weighted_multiplicity(g, {0}, 0) == 0);
  CHECK(weighted_multiplicity(g, {0}, 2) == 0);
  CHECK(weighted_multiplicity(g, {3}, 1) == Rational(3, 2));

  auto in = make_fermat_input(4, {1, 1, 1, 1, 1});
  GroupData two = enumerate_group(in, {elem({"0", "1/2", "1/2", "0", "0"}), elem({"0", "0", "1/4", "3/4", "0"})});
  REQUIRE(two.gbar_generators.size() == 2);
  check_group_axioms(two);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (std::size_t j = 0; j < 5; ++j) {
        Rational expect = two.gbar_generators[0][j] * a + two.gbar_generators[1][j] * b;
        CHECK(weighted_multiplicity(two, {a, b}, j) == expect);
      }
}

TEST_CASE("multi-index enumeration") {
  CHECK(multi_indices(0, 3).size() == 1);
  CHECK(multi_indices(1, 3).size() == 4);
  auto idx = multi_indices(2, 2);
  CHECK(idx.size() == 6);
  std::set<std::vector<int>> uniq(idx.begin(), idx.end());
  CHECK(uniq.size() == 6);
}
