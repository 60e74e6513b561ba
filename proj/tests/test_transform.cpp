#include <doctest.h>

#include "endspace/catalog.hpp"
#include "endspace/checks.hpp"
#include "endspace/dsl.hpp"
#include "endspace/samples.hpp"
#include "endspace/transform.hpp"

using namespace endspace;

namespace {


Addr ladder_limit(const OrderTree& t) { return t.node_at(parse_ray("scion(pos(w), 0, 0; pos(w))"), Ordinal::omega()); }

}  // namespace

TEST_CASE("ladder grouping") {
  auto e = catalog("ladder-to-limit");
  auto s = split(e.graph);
  const Addr l = ladder_limit(*e.tree);
  REQUIRE(s.tree->split_limit(l));
  const auto kids = e.tree->children(l, 0, 12);
  for (std::size_t i = 0; i < kids.size(); ++i)
    for (std::size_t j = 0; j < kids.size(); ++j) {
      const bool same_n = *e.graph->upset_neighbourhood(kids[i]) == *e.graph->upset_neighbourhood(kids[j]);
      CHECK((s.tree->pred(kids[i]) == s.tree->pred(kids[j])) == same_n);
    }
  // s_2k sits alone above v(l,{l,k}); odd scions share v(l,{l})
  const Addr v0 = s.tree->pred(kids[0]);
  CHECK(s.tree->child_count(v0) == Card(1));
  CHECK(v0[0].set->size() == 2);
  const Addr odd = s.tree->pred(kids[1]);
  CHECK_FALSE(s.tree->child_count(odd).has_value());
  CHECK(s.tree->children(odd, 0, 3) == std::vector<Addr>{kids[1], kids[3], kids[5]});
  CHECK(s.tree->phi(v0) == l);
  CHECK(s.tree->phi(kids[4]) == kids[4]);
  CHECK_THROWS_AS(s.tree->check_addr(l), Error);
  CHECK_NOTHROW(s.tree->check_addr(v0));
  CHECK(s.tree->tops(parse_ray("pos(w)")).first(3).size() == 3);
}

TEST_CASE("phi preserves order and T' is special") {
  for (const char* name : {"ladder-to-limit", "two-storey", "chain-omega2"}) {
    CAPTURE(std::string(name));
    auto e = catalog(name);
    auto s = split(e.graph);
    const auto tr = truncate(*s.graph, {6, 3, 400});
    REQUIRE(tr.size() > 20);
    for (const Addr& a : tr.vertices) {
      CHECK_NOTHROW(s.tree->check_addr(a));
      for (const Addr& b : tr.vertices)
        if (s.tree->lt(a, b)) CHECK(e.tree->lt(s.tree->phi(a), s.tree->phi(b)));
    }
    CHECK(verify_partition(*s.tree, *canonical_levels(), tr.vertices).ok());
    CHECK(check_tree_lemmas(*s.graph, tr, 3).ok());
  }
}

TEST_CASE("split graph is uniform") {
  auto e = catalog("ladder-to-limit");
  auto s = split(e.graph);
  const auto tr = truncate(*s.graph, {4, 3, 400});
  CHECK_FALSE(check_adhesion_equivalences(*e.graph, truncate(*e.graph, {4, 3, 400})).uniform);
  const auto rep = check_adhesion_equivalences(*s.graph, tr);
  CHECK(rep.uniform);
  CHECK(rep.finite_adhesion);
  std::size_t vnodes = 0;
  for (const Addr& a : tr.vertices) {
    if (!s.tree->is_vnode(a)) continue;
    ++vnodes;
    const auto w = adhesion_witness(*s.graph, a);
    CHECK(w.set == s.graph->witness_set(a));
    for (const Addr& x : w.set) CHECK(s.tree->lt(x, a));
    // the witness of v(l,{l,k}) is the chain node k
    if (a[0].set->size() == 2) CHECK(w.set.size() == 1);
  }
  CHECK(vnodes >= 3);
}

TEST_CASE("trees without split limits are unchanged") {
  auto e = catalog("bintree-tops");
  auto s = split(e.graph);
  const TruncBounds b{5, 2, 500};
  CHECK(s.tree->enumerate(b) == e.tree->enumerate(b));
  const auto tr = truncate(*e.graph, b);
  for (const Addr& a : tr.vertices) CHECK(s.tree->phi(a) == a);
}

TEST_CASE("Phi is injective on ladder rays") {
  auto e = catalog("ladder-to-limit");
  auto s = split(e.graph);
  std::vector<HighRay> rays{parse_ray("pos(w)")};
  for (int j = 0; j < 9; ++j) rays.push_back(parse_ray("scion(pos(w), 0, " + std::to_string(j) + "; pos(w))"));
  for (std::size_t i = 0; i < rays.size(); ++i) {
    CHECK(Phi_inverse(Phi(rays[i])) == rays[i]);
    for (std::size_t j = 0; j < rays.size(); ++j)
      CHECK((e.tree->compare(Phi(rays[i]), Phi(rays[j])).relation == RayRelation::Equal) == (i == j));
  }
  // the strict downset of every v-node maps to the chain below l
  const Addr v = s.tree->node_at(rays[3], Ordinal::omega());
  CHECK(s.tree->downset(v) == rays[0]);
}

TEST_CASE("transport examples") {
  auto e = catalog("ladder-to-limit");
  auto s = split(e.graph);
  const HighRay target = parse_ray("pos(w)");
  auto verdicts = [&](const char* seq) {
    auto rep = transport_check(*e.graph, *s.graph, {{seq, target}});
    REQUIRE(rep.size() == 1);
    CHECK(rep.ok());
    return rep.records()[0];
  };
  auto conv = verdicts("scion(pos(w), 0, 2*n; pos(w))");
  for (const char* k : {"split_exact", "adhesion_exact", "split_oracle", "oracle"}) CHECK(conv[k] == "Converges");
  auto div = verdicts("scion(pos(w), 0, 2*n+1; pos(w))");
  for (const char* k : {"split_exact", "adhesion_exact", "split_oracle", "oracle"}) CHECK(div[k] == "Diverges");

  auto t2 = catalog("two-storey");
  auto s2 = split(t2.graph);
  auto rep = transport_check(*t2.graph, *s2.graph,
                             {{"branch(prefix=rep(0,n); period(1))", parse_ray("period(0)")}});
  CHECK(rep.ok());
  CHECK(rep.records()[0]["split_exact"] == "Converges");
  CHECK(rep.records()[0]["adhesion_exact"] == "Converges");
}

TEST_CASE("transport on generated samples") {
  for (const char* name : {"ladder-to-limit", "bintree-tops"}) {
    CAPTURE(std::string(name));
    auto e = catalog(name);
    auto s = split(e.graph);
    std::vector<TransportSample> samples;
    for (auto& c : convergence_samples(*s.tree, 20, 9)) samples.push_back({c.seq, c.target});
    REQUIRE(samples.size() == 20);
    auto rep = transport_check(*e.graph, *s.graph, samples);
    for (const auto& r : rep.records())
      if (!r["ok"].get<bool>()) FAIL_CHECK(r.dump());
  }
}
