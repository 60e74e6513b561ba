#include <doctest.h>

#include <algorithm>
#include <random>

#include "endspace/dsl.hpp"
#include "endspace/ordinal.hpp"

using namespace endspace;

namespace {

Ordinal W(std::uint32_t e, std::uint64_t c = 1) { return Ordinal::omega_pow(e, c); }

// Independent brute force: every CNF with exponents <= 5, coefficients <= 6,
// at most 3 terms, filtered by weight.
std::vector<Ordinal> brute_force_up_to_weight(std::uint64_t wmax) {
  std::vector<Ordinal> all;
  std::vector<Term> cur;
  auto rec = [&](auto&& self, int max_exp) -> void {
    if (Ordinal::from_terms(cur).weight() <= wmax) all.push_back(Ordinal::from_terms(cur));
    if (cur.size() == 3) return;
    for (int e = max_exp; e >= 0; --e)
      for (std::uint64_t c = 1; c <= 6; ++c) {
        cur.push_back({static_cast<std::uint32_t>(e), c});
        self(self, e - 1);
        cur.pop_back();
      }
  };
  rec(rec, 5);
  std::sort(all.begin(), all.end(), [](const Ordinal& a, const Ordinal& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a < b;
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

Ordinal random_ordinal(std::mt19937_64& rng) {
  std::vector<Term> t;
  for (int e = 3; e >= 0; --e)
    if (rng() % 2) t.push_back({static_cast<std::uint32_t>(e), 1 + rng() % 4});
  return Ordinal::from_terms(t);
}

}  // namespace

TEST_CASE("cmp examples") {
  CHECK(Ordinal(3) < Ordinal::omega());
  const Ordinal a = add(W(1, 2), 1);
  CHECK((a <=> add(W(1, 2), 1)) == std::strong_ordering::equal);
  CHECK(W(2) > add(W(1, 5), 7));
}

TEST_CASE("add examples") {
  CHECK(add(1, Ordinal::omega()) == Ordinal::omega());
  CHECK(add(Ordinal::omega(), 1).to_string() == "w + 1");
  CHECK(add(add(Ordinal::omega(), 3), W(2)) == W(2));
  CHECK(add(W(2, 3), add(W(1), 4)).to_string() == "w^2*3 + w + 4");
}

TEST_CASE("classify examples") {
  CHECK(classify(0).kind == OrdinalKind::Zero);
  auto c = classify(add(Ordinal::omega(), 4));
  CHECK(c.kind == OrdinalKind::Successor);
  CHECK(*c.predecessor == add(Ordinal::omega(), 3));
  CHECK(classify(add(W(2), W(1))).kind == OrdinalKind::Limit);
}

TEST_CASE("left_subtract and multiply") {
  const Ordinal w = Ordinal::omega();
  CHECK(left_subtract(1, w) == w);
  CHECK(left_subtract(3, 7) == Ordinal(4));
  CHECK(left_subtract(add(w, 2), add(W(1, 2), 5)) == add(w, 5));
  CHECK(multiply(w, 2) == W(1, 2));
  CHECK(multiply(2, w) == w);
  CHECK(multiply(add(w, 1), w) == W(2));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = random_ordinal(rng), b = random_ordinal(rng);
    if (a > b) std::swap(a, b);
    CHECK(add(a, left_subtract(a, b)) == b);
  }
}

TEST_CASE("enumeration starts at zero and round-trips") {
  CHECK(enum_ordinal(0) == Ordinal(0));
  CHECK(enum_index(enum_ordinal(17)) == 17);
  for (int n = 0; n < 10000; ++n) REQUIRE(enum_index(enum_ordinal(n)) == n);
}

TEST_CASE("enumeration matches brute-force order up to weight 6") {
  const auto all = brute_force_up_to_weight(6);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(enum_index(all[i]) == i);
    CHECK(enum_ordinal(i) == all[i]);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      if (all[i].weight() < all[j].weight()) CHECK(enum_index(all[i]) < enum_index(all[j]));
  for (std::uint64_t w = 0; w <= 6; ++w) {
    auto ow = ordinals_of_weight(w);
    CHECK(std::count_if(all.begin(), all.end(), [w](const Ordinal& o) { return o.weight() == w; }) ==
          static_cast<long>(ow.size()));
  }
}

TEST_CASE("enumeration indices beyond 64 bits") {
  const Ordinal big = Ordinal::from_terms({{60, 90}, {3, 50}});
  const Natural n = enum_index(big);
  CHECK(n > Natural(std::numeric_limits<std::uint64_t>::max()));
  CHECK(enum_ordinal(n) == big);
  CHECK(enum_next(big) == enum_ordinal(n + 1));
}

TEST_CASE("arithmetic properties on sampled ordinals") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Ordinal a = random_ordinal(rng), b = random_ordinal(rng), c = random_ordinal(rng);
    const int trich = (a < b) + (a == b) + (a > b);
    CHECK(trich == 1);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(add(a, 0) == a);
    CHECK(add(0, a) == a);
    auto k = classify(add(a, 1));
    CHECK(k.kind == OrdinalKind::Successor);
    CHECK(*k.predecessor == a);
  }
}

TEST_CASE("rendering and parsing agree") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Ordinal a = random_ordinal(rng);
    CHECK(parse_ordinal(a.to_string()) == a);
  }
  CHECK(parse_ordinal("w^2*3 + w*1 + 4") == add(W(2, 3), add(W(1), 4)));
  CHECK_THROWS_AS(Ordinal::omega_pow(Ordinal::kMaxExponent + 1), Error);
}

TEST_CASE("cofinal sequences") {
  const Ordinal lim = add(W(2), W(1, 2));
  Ordinal prev = cofinal_element(lim, 0);
  for (std::uint64_t k = 1; k < 20; ++k) {
    Ordinal x = cofinal_element(lim, k);
    CHECK(prev < x);
    CHECK(x < lim);
    prev = x;
  }
  CHECK(cofinal_element(lim, 7) == add(W(2), add(W(1), 7)));
}
