#include <doctest.h>

#include <map>

#include "endspace/catalog.hpp"
#include "endspace/dsl.hpp"
#include "endspace/oracle.hpp"
#include "endspace/samples.hpp"

using namespace endspace;

TEST_CASE("ray text round trip") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    Rng rng(11);
    for (int k = 0; k < 30; ++k) {
      const HighRay r = e.tree->random_ray(rng, 4);
      const std::string s = ray_to_dsl(r);
      CAPTURE(s);
      CHECK(parse_ray(s) == r);
    }
  }
}

TEST_CASE("convergence samples") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    auto e = catalog(n);
    auto a = convergence_samples(*e.tree, 40, 5);
    auto b = convergence_samples(*e.tree, 40, 5);
    REQUIRE(a.size() == 40);
    std::map<std::string, int> fams;
    std::size_t decided = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].seq == b[i].seq);
      ++fams[a[i].family];
      const auto seq = SequenceTemplate::parse(a[i].seq);
      CAPTURE(a[i].seq);
      CAPTURE(ray_to_dsl(a[i].target));
      const Verdict x = converges(*e.tree, seq, a[i].target);
      const Verdict o = oracle_converges(*e.graph, seq, a[i].target, 64);
      CHECK_FALSE(contradicts(x, o));
      decided += x.decided() && o.decided();
    }
    MESSAGE(n << " decided " << decided << " families " << fams.size());
  }
}
