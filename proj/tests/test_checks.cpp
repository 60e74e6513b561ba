#include <doctest.h>

#include "endspace/catalog.hpp"
#include "endspace/checks.hpp"
#include "endspace/dsl.hpp"

using namespace endspace;

TEST_CASE("tree lemmas hold on catalog truncations") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    auto tr = truncation_of_size(*e.graph, 200);
    CHECK(tr.size() >= 200);
    auto rep = check_tree_lemmas(*e.graph, tr, 1);
    CAPTURE(rep.jsonl());
    CHECK(rep.ok());
  }
}

TEST_CASE("tree lemma checker catches a broken graph") {
  // A graph that drops the successor edge into [0,0] violates interval connectivity.
  auto e = catalog("bintree");
  auto tr = truncate(*e.graph, {3, 2, 100});
  FiniteTruncation broken;
  for (const Addr& a : tr.vertices) broken.add_vertex(a);
  for (auto [a, b] : tr.edges)
    if (tr.names[b] != "0.0") broken.add_edge(a, b);
  // the edge-derived order forgets [0,0]'s ancestors; compare against the tree
  auto rep = check_tree_lemmas(*e.graph, broken, 1);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("adhesion equivalences") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    auto tr = truncation_of_size(*e.graph, 150);
    auto r = check_adhesion_equivalences(*e.graph, tr);
    CAPTURE(r.report.jsonl());
    CHECK(r.finite_adhesion);
    CHECK(r.uniform == (e.adhesion == AdhesionClass::Uniform));
  }
}

TEST_CASE("pick rule checks on sampled limits") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    const auto lims = sample_limits(*e.tree, 20, 5);
    for (const auto& levels : {canonical_levels(), pair_swapped_levels()}) {
      auto rep = check_dlt(*uniform_graph(e.tree, levels), lims, 7);
      CAPTURE(rep.jsonl());
      CHECK(rep.ok());
      CHECK(rep.size() == lims.size());
    }
  }
  CHECK(sample_limits(*catalog("chain-omega2").tree, 50, 1).size() == 50);
  CHECK(sample_limits(*catalog("bintree").tree, 50, 1).empty());
}
