#include <doctest.h>

#include "endspace/apps.hpp"
#include "endspace/catalog.hpp"
#include "endspace/checks.hpp"
#include "endspace/dsl.hpp"

using namespace endspace;

namespace {

Addr addr(std::initializer_list<std::uint64_t> xs) {
  Addr a;
  for (auto x : xs) a.push_back(Token::child(x));
  return a;
}

std::vector<HighRay> random_ends(const OrderTree& t, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<HighRay> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(t.random_ray(rng, 4));
  return out;
}

}  // namespace

TEST_CASE("bipartition membership") {
  auto t = catalog("bintree").tree;
  const EndDescriptor zero{parse_ray("period(0)")};
  CHECK(bip_member(*t, zero, t->root()));
  CHECK_FALSE(bip_member(*t, zero, addr({1})));
  CHECK(bip_member(*t, zero, addr({0, 0, 0})));
  auto two = catalog("two-storey").tree;
  const Addr top = two->node_at(parse_ray("scion(period(0), 0, 0; period(1))"), Ordinal::omega());
  CHECK_THROWS_AS(bip_member(*two, zero, top), Error);
}

TEST_CASE("distinguish") {
  auto t = catalog("bintree").tree;
  auto d = distinguish(*t, {parse_ray("period(0)")}, {parse_ray("prefix(0; period(1))")});
  CHECK(d.node == addr({0, 0}));
  CHECK(d.in_first);
  CHECK_FALSE(d.in_second);
  CHECK_THROWS_AS(distinguish(*t, {parse_ray("period(0)")}, {parse_ray("prefix(0, 0; period(0))")}), Error);

  // a proper initial part: the witness is above its top
  auto two = catalog("two-storey").tree;
  auto e = distinguish(*two, {parse_ray("period(0)")}, {parse_ray("scion(period(0), 2, 0; period(1))")});
  CHECK_FALSE(e.in_first);
  CHECK(e.in_second);
  CHECK(two->kind(e.node) == NodeKind::Successor);

  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto c = catalog(n);
    const auto ends = random_ends(*c.tree, 30, 17);
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = 0; j < ends.size(); ++j) {
        if (c.tree->compare(ends[i], ends[j]).relation == RayRelation::Equal) continue;
        auto w = distinguish(*c.tree, {ends[i]}, {ends[j]});
        CHECK(w.in_first != w.in_second);
      }
  }
}

TEST_CASE("nestedness on truncations") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto c = catalog(n);
    const auto tr = truncation_of_size(*c.graph, 150);
    auto rep = nested_check(*c.tree, tr.vertices, random_ends(*c.tree, 20, 3));
    CHECK(rep.ok());
  }
}

TEST_CASE("expansion stages") {
  auto chain = catalog("ray");
  auto x = expansion_build(*chain.graph);
  CHECK(x.stage(parse_ray("pos(w)")) == Ordinal(1));

  auto bin = catalog("bintree");
  auto y = expansion_build(*bin.graph);
  CHECK(y.stage(parse_ray("period(0)")) == Ordinal(1));
  CHECK(y.stage(parse_ray("prefix(1, 1; period(0))")) == Ordinal(1));
  CHECK(y.stage(parse_ray("prefix(1, 1, 1; period(0))")) == Ordinal(2));
  CHECK(y.stage(parse_ray("period(1)")) == Ordinal::omega());
  CHECK(y.witness(parse_ray("prefix(1, 1; period(0))")) == addr({1, 1}));
  CHECK_FALSE(y.witness(parse_ray("period(1)")).has_value());

  auto two = catalog("two-storey");
  auto z = expansion_build(*two.graph);
  CHECK(z.length() <= Ordinal::omega_pow(1, 2).successor());
  CHECK(z.stage(parse_ray("scion(period(0), 0, 0; period(1))")) == Ordinal::omega_pow(1, 2));
  CHECK(z.stage(parse_ray("scion(period(0), 0, 0; period(0))")) == Ordinal::omega() + Ordinal(1));
}

TEST_CASE("expansion verification") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto c = catalog(n);
    auto x = expansion_build(*c.graph);
    auto ends = random_ends(*c.tree, 40, 8);
    const auto tr = truncation_of_size(*c.graph, 60);
    for (const Addr& a : tr.vertices)
      if (auto r = c.tree->least_ray_through(a)) ends.push_back(*r);
    auto rep = expansion_verify(*c.graph, x, ends, convergence_samples(*c.tree, 30, 4));
    for (const auto& r : rep.records())
      if (!r["ok"].get<bool>()) FAIL_CHECK(r.dump());
  }
}
