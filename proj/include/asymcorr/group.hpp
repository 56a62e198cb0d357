#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "asymcorr/rational.hpp"

namespace asymcorr {

// W = X_1^{d/c_1} + ... + X_N^{d/c_N}.
struct FermatInput {
  long d = 0;
  std::vector<long> c;

  std::size_t n() const { return c.size(); }
  Rational weight(std::size_t j) const { return make_rational(c[j], d); }
  long sum_c() const;
  long r() const { return sum_c() - d; }
};

// Validates positivity, gcd(c) = 1 and c_j | d. Does not reject r = 0.
FermatInput make_fermat_input(long d, std::vector<long> c);

class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<Rational> m);

  static GroupElement identity(std::size_t n);

  std::size_t size() const { return m_.size(); }
  const Rational& operator[](std::size_t j) const { return m_[j]; }
  const std::vector<Rational>& multiplicities() const { return m_; }

  GroupElement operator+(const GroupElement& other) const;
  GroupElement operator-() const;
  GroupElement operator-(const GroupElement& other) const { return *this + (-other); }
  GroupElement times(long k) const;

  bool fixes(std::size_t j) const { return m_[j] == 0; }
  std::size_t fixed_count() const;
  bool is_identity() const { return fixed_count() == m_.size(); }

  bool operator==(const GroupElement& other) const { return m_ == other.m_; }
  bool operator<(const GroupElement& other) const { return m_ < other.m_; }

  std::string label() const;

 private:
  std::vector<Rational> m_;
};

Rational age(const GroupElement& g);

struct GroupData {
  FermatInput input;
  std::vector<GroupElement> elements;  // elements[0] is the identity
  std::size_t jay = 0;
  std::vector<GroupElement> gbar_generators;  // normalized so m_1 = 0
  std::vector<std::size_t> gbar_elements;
  std::vector<bool> narrow;
  std::vector<std::size_t> coset_of;  // element -> index of its gbar component
  std::vector<long> jay_power;        // element = jay^k * gbar component, 0 <= k < d
  long r = 0;
  int disc_sign = 0;  // 0 for crepant data
  std::vector<std::string> warnings;

  std::size_t order() const { return elements.size(); }
  std::size_t index_of(const GroupElement& g) const;
  // Index of the element with multiplicities frac(m).
  std::size_t index_of_reduced(const std::vector<Rational>& m) const;
  std::size_t jay_times(long k, std::size_t gbar_index) const;
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
};

// r = 0 raises CrepantInput unless allow_crepant is set; crepant data only supports the exact stages.
GroupData enumerate_group(const FermatInput& input, const std::vector<GroupElement>& generators,
                          bool allow_crepant = false);

// a(k)^j = sum_s k_s m_j(g_s) over the gbar generators.
Rational weighted_multiplicity(const GroupData& group, const std::vector<int>& k, std::size_t j);
std::vector<Rational> weighted_multiplicities(const GroupData& group, const std::vector<int>& k);

// Multi-indices over the gbar generators with total degree <= max_total, graded lexicographic.
std::vector<std::vector<int>> multi_indices(std::size_t generators, int max_total);

}  // namespace asymcorr
