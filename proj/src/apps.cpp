#include "endspace/apps.hpp"

#include <boost/dynamic_bitset.hpp>

#include "endspace/dsl.hpp"

namespace endspace {

bool bip_member(const OrderTree& t, const EndDescriptor& e, const Addr& node) {
  if (t.kind(node) == NodeKind::Limit)
    throw Error(ErrorCode::LimitNode, to_string(node) + " is a limit; Omega_t is for non-limits");
  return t.contains(e.ray, node);
}

Report nested_check(const OrderTree& t, const std::vector<Addr>& nodes, const std::vector<HighRay>& ends) {
  std::vector<Addr> xs;
  for (const Addr& a : nodes)
    if (t.kind(a) != NodeKind::Limit) xs.push_back(a);
  std::vector<HighRay> es = ends;
  for (const Addr& a : xs)
    if (auto r = t.least_ray_through(a)) es.push_back(*r);

  std::vector<boost::dynamic_bitset<>> col(xs.size(), boost::dynamic_bitset<>(es.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t e = 0; e < es.size(); ++e) col[i][e] = bip_member(t, {es[e]}, xs[i]);

  Report rep;
  std::size_t pairs = 0, bad = 0, empty = 0;
  Json examples = Json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    empty += col[i].none();
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      ++pairs;
      bool ok;
      if (t.le(xs[i], xs[j])) ok = col[j].is_subset_of(col[i]);
      else if (t.le(xs[j], xs[i])) ok = col[i].is_subset_of(col[j]);
      else ok = !col[i].intersects(col[j]);
      if (!ok && ++bad <= 5) examples.push_back({to_string(xs[i]), to_string(xs[j])});
    }
  }
  rep.check("nested", bad == 0,
            {{"nodes", xs.size()}, {"pairs", pairs}, {"ends", es.size()}, {"violations", bad}, {"examples", examples}});
  rep.check("nested.nonempty", empty == 0, {{"empty", empty}});
  return rep;
}

Distinction distinguish(const OrderTree& t, const EndDescriptor& e1, const EndDescriptor& e2) {
  const RayComparison c = t.compare(e1.ray, e2.ray);
  if (c.relation == RayRelation::Equal) throw Error(ErrorCode::EqualEnds, "the ends have the same high-ray");
  // the ray not included in the other one carries the difference
  const HighRay& r = c.relation == RayRelation::FirstInSecond ? e2.ray : e1.ray;
  Addr node = t.node_at(r, c.meet);
  if (t.kind(node) == NodeKind::Limit) node = t.node_at(r, c.meet.successor());
  return {node, bip_member(t, e1, node), bip_member(t, e2, node)};
}

// ------------------------------------------------------------------ expansion

namespace {

bool leftmost_through(const OrderTree& t, const HighRay& r, const Addr& c) {
  const auto l = t.least_ray_through(c);
  return l && t.compare(*l, r).relation == RayRelation::Equal;
}

}  // namespace

Ordinal DiscreteExpansion::stage(const HighRay& r) const {
  const Ordinal lam = t_->order_type(r);
  std::vector<Term> terms = lam.terms();
  if (terms.back().exp != 1) return lam;
  if (--terms.back().coef == 0) terms.pop_back();
  const Ordinal l = Ordinal::from_terms(terms);
  // Leftmost-ness is inherited upwards, and descriptors settle into their
  // period within a bounded number of steps.
  auto leftmost = [&](std::uint64_t n) { return leftmost_through(*t_, r, t_->node_at(r, l + Ordinal(n + 1))); };
  std::uint64_t lo = 1, hi = 16 + 4 * to_string(r).size();
  if (!leftmost(hi)) return lam;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (leftmost(mid)) hi = mid;
    else lo = mid + 1;
  }
  return l + Ordinal(lo);
}

std::optional<Addr> DiscreteExpansion::witness(const HighRay& r) const {
  const Ordinal s = stage(r);
  if (!s.is_successor()) return std::nullopt;
  return t_->node_at(r, s.successor());
}

DiscreteExpansion expansion_build(const TGraph& g) { return DiscreteExpansion(g.tree()); }

Report expansion_verify(const TGraph& g, const DiscreteExpansion& x, const std::vector<HighRay>& ends,
                        const std::vector<ConvergenceSample>& sequences) {
  const OrderTree& t = g.tree();
  Report rep;
  std::vector<Ordinal> stages;
  for (const HighRay& r : ends) stages.push_back(x.stage(r));

  std::size_t uncovered = 0;
  for (const Ordinal& s : stages) uncovered += !(s < x.length());
  rep.check("expansion.cover", uncovered == 0, {{"ends", ends.size()}, {"uncovered", uncovered}});

  // membership along every sampled stage index and its successor
  std::vector<Ordinal> idx = stages;
  for (const Ordinal& s : stages) idx.push_back(s.successor());
  std::sort(idx.begin(), idx.end());
  std::size_t non_monotone = 0;
  for (const HighRay& r : ends) {
    bool was = false;
    for (const Ordinal& i : idx) {
      const bool in = x.in_stage(r, i);
      non_monotone += was && !in;
      was = in;
    }
  }
  rep.check("expansion.increasing", non_monotone == 0, {{"indices", idx.size()}, {"violations", non_monotone}});

  std::size_t chosen = 0, bad_choice = 0, not_isolated = 0;
  Json examples = Json::array();
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const auto w = x.witness(ends[i]);
    if (!w) continue;
    ++chosen;
    if (!bip_member(t, {ends[i]}, *w) || !leftmost_through(t, ends[i], *w)) ++bad_choice;
    for (std::size_t j = 0; j < ends.size(); ++j) {
      if (j == i || !(stages[j] == stages[i])) continue;
      if (t.compare(ends[i], ends[j]).relation == RayRelation::Equal) continue;
      if (bip_member(t, {ends[j]}, *w) && ++not_isolated <= 5)
        examples.push_back({ray_to_dsl(ends[i]), ray_to_dsl(ends[j]), to_string(*w)});
    }
  }
  rep.check("expansion.choice", bad_choice == 0, {{"chosen", chosen}, {"violations", bad_choice}});
  rep.check("expansion.isolation", not_isolated == 0, {{"chosen", chosen}, {"examples", examples}});

  std::size_t checked = 0, open = 0;
  Json bad = Json::array();
  for (const auto& s : sequences) {
    const auto seq = SequenceTemplate::parse(s.seq);
    if (converges(t, seq, s.target).kind != VerdictKind::Converges) continue;
    ++checked;
    std::vector<Ordinal> st;
    for (std::uint64_t n = 64; n < 72; ++n) st.push_back(x.stage(seq.at(n)));
    const Ordinal top = *std::max_element(st.begin(), st.end());
    const bool constant = std::all_of(st.begin(), st.end(), [&](const Ordinal& o) { return o == st[0]; });
    Ordinal bound = top;
    if (!constant)
      for (std::size_t i = 1; i < st.size(); ++i)
        if (st[i - 1] < st[i]) bound = std::max(bound, affine_supremum(st[i - 1], st[i]));
    if (!(x.stage(s.target) <= bound)) {
      ++open;
      if (bad.size() < 5) bad.push_back({s.seq, ray_to_dsl(s.target), bound.to_string()});
    }
  }
  rep.check("expansion.closure", open == 0, {{"sequences", checked}, {"violations", open}, {"examples", bad}});
  return rep;
}

}  // namespace endspace
