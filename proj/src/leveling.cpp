#include "endspace/leveling.hpp"

#include <map>

namespace endspace {

namespace {

bool key_less(const Ordinal& a, const Ordinal& b) { return enum_less(a, b); }

}  // namespace

Ordinal CanonicalLevels::min_in(const std::optional<Ordinal>& lo, const Ordinal& lim) const {
  if (!lo) {
    if (lim.is_zero()) throw Error(ErrorCode::InvalidSpec, "empty level interval");
    return 0;
  }
  // The least-key element of (lo, lim) is the least of the minimal members
  // of each "first difference from lo" class that still lies below lim.
  std::vector<Ordinal> cands{lo->successor()};
  const auto& t = lo->terms();
  std::vector<Term> prefix;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<Term> bump = prefix;
    bump.push_back({t[i].exp, t[i].coef + 1});
    cands.push_back(Ordinal::from_terms(bump));
    if (t[i].exp < Ordinal::kMaxExponent)
      cands.push_back(add(Ordinal::from_terms(prefix), Ordinal::omega_pow(t[i].exp + 1)));
    prefix.push_back(t[i]);
  }
  std::optional<Ordinal> best;
  for (const Ordinal& c : cands)
    if (*lo < c && c < lim && (!best || key_less(c, *best))) best = c;
  if (!best) throw Error(ErrorCode::InvalidSpec, "empty level interval");
  return *best;
}

Natural PairSwappedLevels::index(const Ordinal& h) const {
  Natural n = enum_index(h);
  if (n % 2 == 0) return n + 1;
  return n - 1;
}

Ordinal PairSwappedLevels::min_in(const std::optional<Ordinal>& lo, const Ordinal& lim) const {
  const Ordinal m = CanonicalLevels().min_in(lo, lim);
  if (enum_index(m) % 2 == 0) {
    const Ordinal partner = enum_next(m);
    if ((!lo || *lo < partner) && partner < lim) return partner;
  }
  return m;
}

LevelOrderPtr canonical_levels() {
  static const LevelOrderPtr p = std::make_shared<CanonicalLevels>();
  return p;
}

LevelOrderPtr pair_swapped_levels() {
  static const LevelOrderPtr p = std::make_shared<PairSwappedLevels>();
  return p;
}

Natural level_index(const OrderTree& tree, const LevelOrder& levels, const Addr& a) {
  return levels.index(tree.height(a));
}

PartitionReport verify_partition(const OrderTree& tree, const LevelOrder& levels, const std::vector<Addr>& nodes) {
  PartitionReport rep;
  rep.nodes = nodes.size();
  std::map<Natural, std::vector<std::size_t>> classes;
  std::map<Natural, Ordinal> level_of;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Ordinal h = tree.height(nodes[i]);
    const Natural n = levels.index(h);
    classes[n].push_back(i);
    auto [it, fresh] = level_of.emplace(n, h);
    if (!fresh && !(it->second == h))
      rep.failures.push_back("index " + n.str() + " shared by heights " + it->second.to_string() + " and " +
                             h.to_string());
  }
  rep.classes = classes.size();
  for (const auto& [n, members] : classes)
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y)
        if (tree.comparable(nodes[members[x]], nodes[members[y]]))
          rep.failures.push_back("comparable nodes " + to_string(nodes[members[x]]) + " and " +
                                 to_string(nodes[members[y]]) + " share index " + n.str());
  return rep;
}

}  // namespace endspace
