#include "endspace/checks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace endspace {

namespace {

using Bits = boost::dynamic_bitset<>;

// Component labels of tr minus `removed`; removed vertices get npos.
std::vector<std::size_t> labels_without(const FiniteTruncation& tr, const Bits& removed) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(tr.size(), none);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < tr.size(); ++s) {
    if (removed.test(s) || label[s] != none) continue;
    label[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : tr.adj[v])
        if (!removed.test(u) && label[u] == none) {
          label[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return label;
}

Json names_of(const FiniteTruncation& tr, std::initializer_list<std::size_t> vs) {
  Json out = Json::array();
  for (std::size_t v : vs) out.push_back(tr.names[v]);
  return out;
}

std::vector<Addr> nodes_above(const OrderTree& t, const Addr& a, std::size_t want) {
  std::vector<Addr> out;
  std::vector<Addr> frontier{a};
  std::set<std::string> seen{to_string(a)};
  auto push = [&](const Addr& x) {
    if (out.size() < want && seen.insert(to_string(x)).second) {
      out.push_back(x);
      frontier.push_back(x);
    }
  };
  for (std::size_t i = 0; i < frontier.size() && out.size() < want; ++i) {
    const Addr x = frontier[i];
    for (const Addr& c : t.children(x, 0, 3)) push(c);
    if (t.child_count(x).value_or(1) == 0) continue;
    if (auto r = t.least_ray_through(t.children(x, 0, 1).front()))
      for (const Addr& top : t.tops(*r).first(2)) push(top);
  }
  return out;
}

}  // namespace

TruncOrder TruncOrder::build(const TGraph& g, const FiniteTruncation& tr) {
  TruncOrder o;
  const std::size_t n = tr.size();
  o.height.resize(n);
  for (std::size_t v = 0; v < n; ++v) o.height[v] = g.tree().height(tr.vertices[v]);
  o.by_height.resize(n);
  std::iota(o.by_height.begin(), o.by_height.end(), 0);
  std::stable_sort(o.by_height.begin(), o.by_height.end(),
                   [&](std::size_t a, std::size_t b) { return o.height[a] < o.height[b]; });
  o.below.assign(n, Bits(n));
  std::vector<std::vector<std::size_t>> lower(n);
  for (const auto& [lo, hi] : tr.edges) lower[hi].push_back(lo);
  for (std::size_t v : o.by_height)
    for (std::size_t u : lower[v]) {
      o.below[v].set(u);
      o.below[v] |= o.below[u];
    }
  return o;
}

FiniteTruncation truncation_of_size(const TGraph& g, std::size_t min_nodes) {
  FiniteTruncation tr;
  for (std::uint32_t depth = 2; depth <= 4096; depth *= 2) {
    tr = truncate(g, {depth, 2, 2 * min_nodes});
    if (tr.size() >= min_nodes) return tr;
  }
  return tr;
}

std::vector<Addr> sample_limits(const OrderTree& t, std::size_t want, std::uint64_t seed) {
  std::vector<Addr> out;
  std::set<std::string> seen;
  auto push = [&](const Addr& a) {
    if (out.size() < want && t.kind(a) == NodeKind::Limit && seen.insert(to_string(a)).second) out.push_back(a);
  };
  for (const Addr& a : t.enumerate({64, 2, 4000})) push(a);
  if (!t.has_rays()) return out;
  Rng rng(seed);
  for (int i = 0; i < 400 && out.size() < want; ++i)
    for (const Addr& a : t.tops(t.random_ray(rng, 6)).first(want)) push(a);
  return out;
}

Report check_tree_lemmas(const TGraph& g, const FiniteTruncation& tr, std::uint64_t seed) {
  Report rep;
  const std::size_t n = tr.size();
  const TruncOrder ord = TruncOrder::build(g, tr);

  // Order derived from edges must agree with the tree.
  {
    Rng rng(seed);
    std::size_t bad = 0;
    for (int k = 0; k < 2000 && n > 0; ++k) {
      const std::size_t a = rng() % n, b = rng() % n;
      bad += ord.lt(a, b) != g.tree().lt(tr.vertices[a], tr.vertices[b]);
    }
    rep.check("truncation-order", bad == 0, {{"violations", bad}});
  }

  // (i) the common downset of incomparable a, b separates them.
  {
    std::map<Bits, std::vector<std::size_t>> cache;
    std::size_t pairs = 0, bad = 0;
    Json examples = Json::array();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        if (ord.comparable(a, b)) continue;
        ++pairs;
        Bits d = ord.below[a] & ord.below[b];
        auto it = cache.find(d);
        if (it == cache.end()) it = cache.emplace(d, labels_without(tr, d)).first;
        if (it->second[a] == it->second[b]) {
          ++bad;
          if (examples.size() < 5) examples.push_back(names_of(tr, {a, b}));
        }
      }
    rep.check("separator", bad == 0, {{"pairs", pairs}, {"violations", bad}, {"examples", examples}});
  }

  // (ii) connected vertex sets have a unique minimal element.
  {
    Rng rng(seed + 1);
    std::size_t bad = 0;
    const int samples = n ? 3000 : 0;
    for (int k = 0; k < samples; ++k) {
      const std::size_t target = 1 + rng() % 24;
      Bits in(n);
      std::vector<std::size_t> members{static_cast<std::size_t>(rng() % n)};
      in.set(members[0]);
      for (int tries = 0; members.size() < target && tries < 200; ++tries) {
        const std::size_t v = members[rng() % members.size()];
        if (tr.adj[v].empty()) break;
        const std::size_t u = tr.adj[v][rng() % tr.adj[v].size()];
        if (!in.test(u)) {
          in.set(u);
          members.push_back(u);
        }
      }
      std::size_t minimal = 0;
      for (std::size_t v : members) minimal += !ord.below[v].intersects(in);
      bad += minimal != 1;
    }
    rep.check("unique-minimum", bad == 0, {{"subsets", samples}, {"violations", bad}});
  }

  // (iv) every interval [a, b] is connected. Intervals are chain segments, so
  // for each b, add its downset top-down and require one component throughout.
  {
    std::size_t intervals = 0, bad = 0;
    Json examples = Json::array();
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> chain;
      for (std::size_t v = ord.below[b].find_first(); v != Bits::npos; v = ord.below[b].find_next(v)) chain.push_back(v);
      std::sort(chain.begin(), chain.end(), [&](std::size_t x, std::size_t y) { return ord.height[x] > ord.height[y]; });
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      Bits in(n);
      in.set(b);
      std::size_t comps = 1;
      for (std::size_t a : chain) {
        in.set(a);
        ++comps;
        for (std::size_t u : tr.adj[a])
          if (in.test(u) && find(u) != find(a)) {
            parent[find(u)] = find(a);
            --comps;
          }
        ++intervals;
        if (comps != 1) {
          ++bad;
          if (examples.size() < 5) examples.push_back(names_of(tr, {a, b}));
        }
      }
    }
    rep.check("interval-connected", bad == 0, {{"intervals", intervals}, {"violations", bad}, {"examples", examples}});
  }
  return rep;
}

AdhesionReport check_adhesion_equivalences(const TGraph& g, const FiniteTruncation& tr) {
  AdhesionReport out;
  const OrderTree& t = g.tree();
  const TruncOrder ord = TruncOrder::build(g, tr);
  const std::size_t n = tr.size();

  // Neighbours in tr of the members of `inside` that are not themselves inside.
  auto scan = [&](const Bits& inside) {
    std::set<std::string> seen;
    for (std::size_t y = inside.find_first(); y != Bits::npos; y = inside.find_next(y))
      for (std::size_t x : tr.adj[y])
        if (!inside.test(x)) seen.insert(tr.names[x]);
    return seen;
  };
  auto sound = [&](const std::set<std::string>& seen, const std::vector<Addr>& cert) {
    std::set<std::string> c;
    for (const Addr& a : cert) c.insert(to_string(a));
    return std::includes(c.begin(), c.end(), seen.begin(), seen.end());
  };

  std::size_t successes = 0, limits = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const bool is_limit = ord.height[s].is_limit();
    Bits inside(n);
    for (std::size_t y = 0; y < n; ++y)
      if (ord.lt(s, y) || (!is_limit && y == s)) inside.set(y);
    if (!is_limit) {
      ++successes;
      auto cert = g.upset_neighbourhood(tr.vertices[s]);
      const bool ok = cert && sound(scan(inside), *cert);
      if (!ok) {
        out.finite_adhesion = false;
        out.report.check("finite-adhesion", false, {{"node", tr.names[s]}, {"certified", cert.has_value()}});
      }
    } else {
      ++limits;
      auto cert = g.strict_upset_neighbourhood(tr.vertices[s]);
      const bool ok = cert && sound(scan(inside), *cert);
      if (!ok) out.uniform = false;
      // an uncertified limit classifies the graph as not uniform; an unsound certificate is a failure
      if (!ok) out.report.check("uniform-adhesion", !cert, {{"node", tr.names[s]}, {"certified", cert.has_value()}});
      if (cert) {
        // S_t absorbs the down-neighbours below t of every node above t.
        const auto w = adhesion_witness(g, tr.vertices[s]);
        std::set<std::string> sset;
        for (const Addr& a : w.set) sset.insert(to_string(a));
        std::set<std::string> below;
        for (std::size_t y = inside.find_first(); y != Bits::npos; y = inside.find_next(y))
          for (std::size_t x : tr.adj[y])
            if (ord.lt(x, s)) below.insert(tr.names[x]);
        if (!std::includes(sset.begin(), sset.end(), below.begin(), below.end())) {
          out.uniform = false;
          out.report.check("uniform-witness", false, {{"node", tr.names[s]}});
        }
      }
    }
  }
  (void)t;
  out.report.check("finite-adhesion-summary", out.finite_adhesion, {{"nodes", successes}});
  out.report.add({{"check", "uniform-adhesion-summary"}, {"ok", true}, {"uniform", out.uniform}, {"limits", limits}});
  return out;
}

Report check_dlt(const UniformGraph& g, const std::vector<Addr>& limits, std::uint64_t seed) {
  Report rep;
  const OrderTree& t = g.tree();
  const LevelOrder& lv = g.levels();
  Rng rng(seed);
  for (const Addr& lim : limits) {
    const Ordinal lam = t.height(lim);
    Json rec{{"check", "dlt"}, {"limit", to_string(lim)}};
    std::vector<std::string> problems;

    // Each pick is the unique least-index level in its interval.
    std::optional<Ordinal> prev;
    for (int i = 0; i < 6; ++i) {
      const Ordinal p = next_pick(lv, prev, lam);
      if (!(p < lam) || (prev && !(*prev < p))) problems.push_back("pick outside interval at step " + std::to_string(i));
      const Natural idx = lv.index(p);
      std::size_t same = 0;
      for (std::uint64_t w = 1; w <= p.weight() + 1; ++w)
        for (const Ordinal& o : ordinals_of_weight(w)) {
          if (!(o < lam) || (prev && !(*prev < o))) continue;
          const Natural j = lv.index(o);
          if (j < idx) problems.push_back("smaller index " + o.to_string() + " below pick " + p.to_string());
          same += j == idx;
        }
      if (!(p.is_zero() && !prev) && same != 1) problems.push_back("level meets interval " + std::to_string(same) + " times");
      if (level_index(t, lv, t.ancestor(lim, p)) != idx) problems.push_back("level index of picked node");
      prev = p;
    }

    // Cofinality against 20 lower nodes.
    for (int k = 0; k < 20; ++k) {
      const Ordinal h = add(cofinal_element(lam, rng() % 12), Ordinal(rng() % 6));
      std::optional<Ordinal> q;
      int steps = 0;
      do q = next_pick(lv, q, lam);
      while (*q < h && ++steps < 100000);
      if (*q < h) problems.push_back("no pick above " + h.to_string());
      else if (!t.le(t.ancestor(lim, h), t.ancestor(lim, *q))) problems.push_back("pick not above node");
    }

    // Witness soundness for nodes above.
    const auto w = g.witness_set(lim);
    std::set<std::string> sset;
    for (const Addr& a : w) sset.insert(to_string(a));
    for (const Addr& y : nodes_above(t, lim, 24))
      for (const Addr& d : g.down_neighbours_upto(y, lam))
        if (t.lt(d, lim) && !sset.count(to_string(d)))
          problems.push_back("down-neighbour " + to_string(d) + " of " + to_string(y) + " outside S_t");

    rec["ok"] = problems.empty();
    rec["witness_size"] = w.size();
    if (!problems.empty()) rec["problems"] = problems;
    rep.add(std::move(rec));
  }
  return rep;
}

}  // namespace endspace
