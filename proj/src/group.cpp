#include "asymcorr/group.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "asymcorr/errors.hpp"

namespace asymcorr {

long FermatInput::sum_c() const { return std::accumulate(c.begin(), c.end(), 0L); }

FermatInput make_fermat_input(long d, std::vector<long> c) {
  if (d <= 0) fail(ErrorCode::InvalidInput, "d must be positive");
  if (c.empty()) fail(ErrorCode::InvalidInput, "need at least one weight");
  long g = 0;
  for (long cj : c) {
    if (cj <= 0) fail(ErrorCode::InvalidInput, "weights must be positive");
    if (d % cj != 0) fail(ErrorCode::InvalidInput, "weight " + std::to_string(cj) + " does not divide d");
    g = std::gcd(g, cj);
  }
  if (g != 1) fail(ErrorCode::InvalidInput, "weights must have gcd 1");
  return FermatInput{d, std::move(c)};
}

GroupElement::GroupElement(std::vector<Rational> m) : m_(std::move(m)) {
  for (auto& x : m_) x = frac(x);
}

GroupElement GroupElement::identity(std::size_t n) { return GroupElement(std::vector<Rational>(n, Rational(0))); }

GroupElement GroupElement::operator+(const GroupElement& other) const {
  std::vector<Rational> m(m_.size());
  for (std::size_t j = 0; j < m_.size(); ++j) m[j] = m_[j] + other.m_[j];
  return GroupElement(std::move(m));
}

GroupElement GroupElement::operator-() const {
  std::vector<Rational> m(m_.size());
  for (std::size_t j = 0; j < m_.size(); ++j) m[j] = -m_[j];
  return GroupElement(std::move(m));
}

GroupElement GroupElement::times(long k) const {
  std::vector<Rational> m(m_.size());
  for (std::size_t j = 0; j < m_.size(); ++j) m[j] = m_[j] * k;
  return GroupElement(std::move(m));
}

std::size_t GroupElement::fixed_count() const {
  return static_cast<std::size_t>(std::count_if(m_.begin(), m_.end(), [](const Rational& x) { return x == 0; }));
}

std::string GroupElement::label() const {
  std::string s = "(";
  for (std::size_t j = 0; j < m_.size(); ++j) {
    if (j) s += ",";
    s += is_integer(m_[j]) ? m_[j].get_num().get_str() : m_[j].get_str();
  }
  return s + ")";
}

Rational age(const GroupElement& g) {
  Rational a = 0;
  for (const auto& x : g.multiplicities()) a += x;
  return a;
}

std::size_t GroupData::index_of(const GroupElement& g) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == g) return i;
  fail(ErrorCode::InvalidInput, "element " + g.label() + " not in group");
}

std::size_t GroupData::index_of_reduced(const std::vector<Rational>& m) const { return index_of(GroupElement(m)); }

std::size_t GroupData::jay_times(long k, std::size_t gbar_index) const {
  return index_of(elements[jay].times(k) + elements[gbar_index]);
}

std::size_t GroupData::multiply(std::size_t a, std::size_t b) const { return index_of(elements[a] + elements[b]); }

std::size_t GroupData::inverse(std::size_t a) const { return index_of(-elements[a]); }

namespace {

void validate_element(const FermatInput& input, const GroupElement& g) {
  if (g.size() != input.n()) fail(ErrorCode::InvalidMultiplicity, "generator has wrong length");
  for (std::size_t j = 0; j < input.n(); ++j) {
    const Rational& m = g[j];
    Rational steps = m / input.weight(j);
    if (!is_integer(steps))
      fail(ErrorCode::InvalidMultiplicity, "m_" + std::to_string(j + 1) + " of " + g.label() + " is not a multiple of q_j");
    if (m != 0 && m < input.weight(j))
      fail(ErrorCode::InvalidMultiplicity, "m_" + std::to_string(j + 1) + " of " + g.label() + " is below q_j");
  }
}

// Replace g by g * jay^k with k*c_1 = -d*m_1(g) mod d, smallest k >= 0.
GroupElement normalize_generator(const FermatInput& input, const GroupElement& jay, const GroupElement& g) {
  long dm1 = to_long(g[0] * input.d);
  long c1 = input.c[0];
  long modulus = input.d;
  // Solve k*c1 = -dm1 (mod d) by extended Euclid.
  long a = ((c1 % modulus) + modulus) % modulus;
  long b = ((-dm1 % modulus) + modulus) % modulus;
  long old_r = a, rr = modulus, old_s = 1, s = 0;
  while (rr != 0) {
    long qt = old_r / rr;
    std::tie(old_r, rr) = std::make_pair(rr, old_r - qt * rr);
    std::tie(old_s, s) = std::make_pair(s, old_s - qt * s);
  }
  long gg = old_r;
  if (b % gg != 0) fail(ErrorCode::NoSplitting, "congruence for " + g.label() + " has no solution");
  long mod_reduced = modulus / gg;
  long k = ((old_s % mod_reduced) * ((b / gg) % mod_reduced)) % mod_reduced;
  k = ((k % mod_reduced) + mod_reduced) % mod_reduced;
  GroupElement out = g + jay.times(k);
  if (out[0] != 0) fail(ErrorCode::NoSplitting, "normalized generator " + out.label() + " moves the first coordinate");
  return out;
}

std::vector<GroupElement> closure(std::size_t n, const std::vector<GroupElement>& gens) {
  std::set<GroupElement> seen{GroupElement::identity(n)};
  std::deque<GroupElement> queue{GroupElement::identity(n)};
  while (!queue.empty()) {
    GroupElement g = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      GroupElement h = g + s;
      if (seen.insert(h).second) queue.push_back(h);
    }
  }
  std::vector<GroupElement> out(seen.begin(), seen.end());
  // identity first, then by age and lexicographic order for determinism
  std::stable_sort(out.begin(), out.end(), [](const GroupElement& a, const GroupElement& b) {
    Rational aa = age(a), ab = age(b);
    if (aa != ab) return aa < ab;
    return a < b;
  });
  return out;
}

}  // namespace

GroupData enumerate_group(const FermatInput& input, const std::vector<GroupElement>& generators,
                          bool allow_crepant) {
  GroupData gd;
  gd.input = input;
  gd.r = input.r();
  if (gd.r == 0 && !allow_crepant) fail(ErrorCode::CrepantInput, "r = sum c_j - d = 0");
  gd.disc_sign = gd.r > 0 ? 1 : (gd.r < 0 ? -1 : 0);

  std::vector<Rational> jm(input.n());
  for (std::size_t j = 0; j < input.n(); ++j) jm[j] = input.weight(j);
  GroupElement jay(jm);

  for (const auto& g : generators) {
    validate_element(input, g);
    GroupElement h = normalize_generator(input, jay, g);
    if (!h.is_identity() && std::find(gd.gbar_generators.begin(), gd.gbar_generators.end(), h) == gd.gbar_generators.end())
      gd.gbar_generators.push_back(h);
  }

  std::vector<GroupElement> all_gens = gd.gbar_generators;
  all_gens.push_back(jay);
  gd.elements = closure(input.n(), all_gens);
  gd.jay = gd.index_of(jay);

  std::vector<GroupElement> gbar = closure(input.n(), gd.gbar_generators);
  for (const auto& g : gbar) gd.gbar_elements.push_back(gd.index_of(g));
  for (const auto& g : gbar) {
    for (long k = 1; k < input.d; ++k)
      if (g == jay.times(k)) fail(ErrorCode::NoSplitting, "gbar meets <jay> in " + g.label());
  }
  if (gd.elements.size() != static_cast<std::size_t>(input.d) * gbar.size())
    fail(ErrorCode::NoSplitting, "|G| != d |Gbar|");

  std::map<GroupElement, std::size_t> gbar_index;
  for (std::size_t i = 0; i < gbar.size(); ++i) gbar_index[gbar[i]] = gd.gbar_elements[i];

  gd.coset_of.assign(gd.elements.size(), 0);
  gd.jay_power.assign(gd.elements.size(), -1);
  for (std::size_t i = 0; i < gd.elements.size(); ++i) {
    int hits = 0;
    for (long k = 0; k < input.d; ++k) {
      auto it = gbar_index.find(gd.elements[i] - jay.times(k));
      if (it != gbar_index.end()) {
        ++hits;
        gd.coset_of[i] = it->second;
        gd.jay_power[i] = k;
      }
    }
    if (hits != 1) fail(ErrorCode::NoSplitting, "element " + gd.elements[i].label() + " does not factor uniquely");
  }

  gd.narrow.resize(gd.elements.size());
  for (std::size_t i = 0; i < gd.elements.size(); ++i) gd.narrow[i] = (gd.elements[i] + jay).fixed_count() == 0;

  for (const auto& g : gd.elements) {
    if (g.fixed_count() > 0 && !is_integer(age(g)))
      gd.warnings.push_back("element " + g.label() + " fixes a coordinate but is not in SL_N");
  }
  return gd;
}

Rational weighted_multiplicity(const GroupData& group, const std::vector<int>& k, std::size_t j) {
  Rational a = 0;
  for (std::size_t s = 0; s < k.size() && s < group.gbar_generators.size(); ++s) a += group.gbar_generators[s][j] * k[s];
  return a;
}

std::vector<Rational> weighted_multiplicities(const GroupData& group, const std::vector<int>& k) {
  std::vector<Rational> a(group.input.n());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = weighted_multiplicity(group, k, j);
  return a;
}

std::vector<std::vector<int>> multi_indices(std::size_t generators, int max_total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(generators, 0);
  for (int total = 0; total <= max_total; ++total) {
    // compositions of `total` into `generators` parts
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
      if (pos + 1 >= generators) {
        if (generators == 0) {
          if (left == 0) out.push_back(cur);
          return;
        }
        cur[pos] = left;
        out.push_back(cur);
        return;
      }
      for (int v = left; v >= 0; --v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, total);
    if (generators == 0) break;
  }
  return out;
}

}  // namespace asymcorr
