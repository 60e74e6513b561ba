#include <doctest.h>

#include "endspace/catalog.hpp"
#include "endspace/endspace.hpp"

using namespace endspace;

namespace {

Verdict exact(const char* tree, const char* seq, const char* target) {
  return converges(*catalog(tree).tree, SequenceTemplate::parse(seq), parse_ray(target));
}

}  // namespace

TEST_CASE("realized rays") {
  auto c = catalog("ray");
  auto p = realize_ray(*c.graph, parse_ray("pos(w)"), 5);
  REQUIRE(p.size() == 5);
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(p[i] == Addr{Token::at(i)});

  auto b = catalog("bintree");
  auto q = realize_ray(*b.graph, parse_ray("period(0)"), 4);
  CHECK(to_string(q[0]) == ".");
  CHECK(to_string(q[3]) == "0.0.0");

  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      const HighRay r = e.tree->random_ray(rng, 4);
      auto p5 = realize_ray(*e.graph, r, 5);
      auto p9 = realize_ray(*e.graph, r, 9);
      CHECK(std::equal(p5.begin(), p5.end(), p9.begin()));
      for (std::size_t i = 0; i < p9.size(); ++i) {
        CHECK(e.tree->contains(r, p9[i]));
        if (i) {
          CHECK(e.graph->adjacent(p9[i - 1], p9[i]));
          CHECK(e.tree->lt(p9[i - 1], p9[i]));
        }
      }
    }
  }
}

TEST_CASE("exact convergence examples") {
  auto v1 = exact("bintree", "branch(prefix=rep(0,n); period(1))", "period(0)");
  CHECK(v1.kind == VerdictKind::Converges);
  auto v2 = exact("bintree", "prefix(0; period(1))", "period(0)");
  REQUIRE(v2.kind == VerdictKind::Diverges);
  CHECK(v2.witness["successor"] == "0.0");
  auto v3 = exact("two-storey", "scion(period(0), n, 0; period(1))", "period(0)");
  CHECK(v3.kind == VerdictKind::Converges);
  auto v4 = exact("two-storey", "scion(period(0), 0, 0; branch(prefix=rep(0,n); period(1)))", "period(0)");
  REQUIRE(v4.kind == VerdictKind::Diverges);
  CHECK(v4.witness["side"] == "A");
  CHECK(exact("chain-omega2", "pos(w*(n+1))", "pos(w^2)").kind == VerdictKind::Converges);
  CHECK(exact("chain-omega2", "pos(w*(n+1))", "pos(w*3)").kind == VerdictKind::Diverges);
  CHECK(exact("bintree", "branch(prefix=rep(0,n*n); period(1))", "period(0)").kind == VerdictKind::Unknown);
  // a repeated block grows the common part as well
  CHECK(exact("bintree", "branch(prefix=rep([0,0],n); period(1))", "period(0)").kind == VerdictKind::Converges);
  CHECK_THROWS_AS(exact("bintree", "period(2)", "period(0)"), Error);
}

TEST_CASE("criterion split partitions the indices") {
  auto t = catalog("two-storey").tree;
  auto seq = SequenceTemplate::parse("scion(period(0), n, 0; period(1))");
  for (std::uint64_t n = 0; n < 30; ++n) {
    auto p = split_point(*t, parse_ray("period(0)"), seq.at(n));
    CHECK(p.a_side);
    auto q = split_point(*t, parse_ray("period(1)"), seq.at(n));
    CHECK_FALSE(q.a_side);
  }
}

TEST_CASE("homeomorphism map") {
  auto e = catalog("bintree-tops");
  auto g1 = uniform_graph(e.tree, canonical_levels());
  auto g2 = uniform_graph(e.tree, pair_swapped_levels());
  auto f = homeo_map(*g1, *g2);
  const EndDescriptor d{parse_ray("prefix(1; period(0))")};
  CHECK(f(d) == d);
  CHECK_THROWS_AS(homeo_map(*g1, *catalog("bintree").graph), Error);
}
