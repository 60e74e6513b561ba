#include "endspace/tgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace endspace {

namespace {

/// All ordinals below `lim` whose weight is at most `wmax`.
std::vector<Ordinal> below_with_weight(const Ordinal& lim, std::uint64_t wmax) {
  std::vector<Ordinal> out;
  std::vector<Term> cur;
  auto rec = [&](auto&& self, std::int64_t max_exp, std::uint64_t used) -> void {
    Ordinal o = Ordinal::from_terms(cur);
    if (o >= lim) return;
    out.push_back(o);
    for (std::int64_t e = max_exp; e >= 0; --e)
      for (std::uint64_t c = 1; used + 1 + static_cast<std::uint64_t>(e) + c <= wmax; ++c) {
        cur.push_back({static_cast<std::uint32_t>(e), c});
        self(self, e - 1, used + 1 + static_cast<std::uint64_t>(e) + c);
        cur.pop_back();
      }
  };
  rec(rec, lim.leading_exp(), 0);
  return out;
}

void dedupe(std::vector<Addr>& v) {
  std::sort(v.begin(), v.end(), AddrLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool TGraph::adjacent(const Addr& a, const Addr& b) const {
  if (a == b) return false;
  const bool up = tree().le(a, b);
  if (!up && !tree().le(b, a)) return false;
  const Addr& lo = up ? a : b;
  const Addr& hi = up ? b : a;
  for (const Addr& d : down_neighbours_upto(hi, tree().height(lo)))
    if (d == lo) return true;
  return false;
}

Ordinal next_pick(const LevelOrder& levels, const std::optional<Ordinal>& prev, const Ordinal& lim) {
  return levels.min_in(prev, lim);
}

// ---------------------------------------------------------------- UniformGraph

std::vector<Addr> UniformGraph::down_neighbours(const Addr& a, std::size_t count) const {
  const Ordinal h = tree_->height(a);
  if (h.is_zero() || count == 0) return {};
  if (h.is_successor()) return {tree_->ancestor(a, h.predecessor())};
  std::vector<Addr> out;
  std::optional<Ordinal> prev;
  while (out.size() < count) {
    prev = next_pick(*levels_, prev, h);
    out.push_back(tree_->ancestor(a, *prev));
  }
  return out;
}

Addr UniformGraph::least_down_neighbour_from(const Addr& a, const Ordinal& from) const {
  const Ordinal h = tree_->height(a);
  if (from >= h) throw Error(ErrorCode::InvalidAddress, "no down-neighbour of " + to_string(a) + " that high");
  if (h.is_successor()) return tree_->ancestor(a, h.predecessor());
  std::optional<Ordinal> prev;
  do prev = next_pick(*levels_, prev, h);
  while (*prev < from);
  return tree_->ancestor(a, *prev);
}

std::vector<Addr> UniformGraph::down_neighbours_upto(const Addr& a, const Ordinal& upto) const {
  const Ordinal h = tree_->height(a);
  if (h.is_zero()) return {};
  if (h.is_successor()) {
    if (h.predecessor() <= upto) return {tree_->ancestor(a, h.predecessor())};
    return {};
  }
  std::vector<Addr> out;
  std::optional<Ordinal> prev;
  for (;;) {
    prev = next_pick(*levels_, prev, h);
    if (*prev > upto) break;
    out.push_back(tree_->ancestor(a, *prev));
  }
  return out;
}

bool UniformGraph::adjacent(const Addr& a, const Addr& b) const {
  if (a == b) return false;
  const bool up = tree_->le(a, b);
  if (!up && !tree_->le(b, a)) return false;
  const Addr& lo = up ? a : b;
  const Addr& hi = up ? b : a;
  return least_down_neighbour_from(hi, tree_->height(lo)) == lo;
}

bool UniformGraph::has_upper_neighbour_beyond_children(const Addr& a) const {
  // A limit above `a` picks it iff its height precedes, in index order, the
  // least-index level between it and that limit; the least limit above is
  // the most permissive.
  auto lim = tree_->min_limit_above(a);
  if (!lim) return false;
  const Ordinal h = tree_->height(a);
  return levels_->index(h) < levels_->index(levels_->min_in(h, *lim));
}

std::vector<Ordinal> UniformGraph::low_picks(const Ordinal& cut, const Ordinal& lim_min) const {
  const Natural bar = levels_->index(levels_->min_in(cut, lim_min));
  std::vector<Ordinal> out;
  std::optional<Ordinal> prev;
  for (;;) {
    prev = levels_->min_in(prev, cut.successor());
    if (*prev == cut || levels_->index(*prev) >= bar) break;
    out.push_back(*prev);
  }
  return out;
}

std::optional<std::vector<Addr>> UniformGraph::upset_neighbourhood(const Addr& s) const {
  const Ordinal h = tree_->height(s);
  std::vector<Addr> out;
  if (h.is_zero()) return out;
  if (h.is_successor()) out.push_back(tree_->pred(s));
  if (h.is_limit()) throw Error(ErrorCode::LimitNode, "up-closure neighbourhoods are for non-limit nodes");
  if (auto lim = tree_->min_limit_above(s))
    for (const Ordinal& q : low_picks(h, *lim)) out.push_back(tree_->ancestor(s, q));
  dedupe(out);
  return out;
}

std::optional<std::vector<Addr>> UniformGraph::strict_upset_neighbourhood(const Addr& t) const {
  const Ordinal h = tree_->height(t);
  std::vector<Addr> out;
  const Card kids = tree_->child_count(t);
  if (!kids || *kids > 0) out.push_back(t);
  if (auto lim = tree_->min_limit_above(t))
    for (const Ordinal& q : low_picks(h, *lim)) out.push_back(tree_->ancestor(t, q));
  dedupe(out);
  return out;
}

std::vector<Addr> UniformGraph::witness_set(const Addr& t) const {
  const Ordinal h = tree_->height(t);
  if (!h.is_limit()) throw Error(ErrorCode::InvalidAddress, to_string(t) + " is not a limit");
  const Natural bar = levels_->index(h);
  std::vector<Ordinal> hs;
  for (const Ordinal& o : below_with_weight(h, h.weight() + 1))
    if (levels_->index(o) < bar) hs.push_back(o);
  std::sort(hs.begin(), hs.end());
  std::vector<Addr> out;
  for (const Ordinal& o : hs) out.push_back(tree_->ancestor(t, o));
  return out;
}

// ---------------------------------------------------------------- ExplicitGraph

std::vector<Addr> ExplicitGraph::down_neighbours(const Addr& a, std::size_t count) const {
  std::vector<Addr> out = base_.down_neighbours(a, count);
  for (Addr& x : rules_.extra_down(a))
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  return out;
}

Addr ExplicitGraph::least_down_neighbour_from(const Addr& a, const Ordinal& from) const {
  Addr best = base_.least_down_neighbour_from(a, from);
  Ordinal bh = tree().height(best);
  for (Addr& x : rules_.extra_down(a)) {
    const Ordinal xh = tree().height(x);
    if (xh >= from && xh < bh) {
      best = std::move(x);
      bh = xh;
    }
  }
  return best;
}

std::vector<Addr> ExplicitGraph::down_neighbours_upto(const Addr& a, const Ordinal& upto) const {
  std::vector<Addr> out = base_.down_neighbours_upto(a, upto);
  for (Addr& x : rules_.extra_down(a))
    if (tree().height(x) <= upto && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  std::sort(out.begin(), out.end(),
            [this](const Addr& x, const Addr& y) { return tree().height(x) < tree().height(y); });
  return out;
}

bool ExplicitGraph::adjacent(const Addr& a, const Addr& b) const {
  if (base_.adjacent(a, b)) return true;
  for (const Addr& x : rules_.extra_down(a))
    if (x == b) return true;
  for (const Addr& x : rules_.extra_down(b))
    if (x == a) return true;
  return false;
}

bool ExplicitGraph::has_upper_neighbour_beyond_children(const Addr& a) const {
  return base_.has_upper_neighbour_beyond_children(a) || (rules_.has_extra_up && rules_.has_extra_up(a));
}

AdhesionWitness adhesion_witness(const TGraph& g, const Addr& t) {
  if (!g.tree().height(t).is_limit()) throw Error(ErrorCode::InvalidAddress, to_string(t) + " is not a limit");
  if (const auto* u = dynamic_cast<const UniformGraph*>(&g)) return {t, u->witness_set(t)};
  auto n = g.strict_upset_neighbourhood(t);
  if (!n) throw Error(ErrorCode::NotUniform, "no finite witness below " + to_string(t));
  AdhesionWitness w{t, {}};
  for (Addr& x : *n)
    if (!(x == t)) w.set.push_back(std::move(x));
  return w;
}

// ---------------------------------------------------------------- truncations

std::optional<std::size_t> FiniteTruncation::find(const Addr& a) const { return find(to_string(a)); }

std::optional<std::size_t> FiniteTruncation::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteTruncation::add_vertex(const Addr& a) {
  std::string name = to_string(a);
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const std::size_t i = vertices.size();
  index_.emplace(name, i);
  vertices.push_back(a);
  names.push_back(std::move(name));
  adj.emplace_back();
  boundary.push_back(false);
  return i;
}

void FiniteTruncation::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return;
  if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) return;
  adj[a].push_back(b);
  adj[b].push_back(a);
  edges.emplace_back(a, b);
}

FiniteTruncation induced(const TGraph& g, const std::vector<Addr>& nodes, const std::string& provenance) {
  const OrderTree& t = g.tree();
  FiniteTruncation tr;
  tr.provenance = provenance;
  for (const Addr& a : nodes) tr.add_vertex(a);
  const std::size_t n = tr.size();
  std::vector<Ordinal> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = t.height(tr.vertices[i]);

  std::vector<Ordinal> sorted = h;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t y = 0; y < n; ++y) {
    if (h[y].is_zero()) continue;
    // Down-neighbours in the set lie no higher than the tallest lower member.
    auto it = std::lower_bound(sorted.begin(), sorted.end(), h[y]);
    if (it == sorted.begin()) continue;
    const Ordinal top = *std::prev(it);
    for (const Addr& d : g.down_neighbours_upto(tr.vertices[y], top))
      if (auto x = tr.find(d)) tr.add_edge(*x, y);
  }
  std::sort(tr.edges.begin(), tr.edges.end());
  for (auto& e : tr.edges)
    if (h[e.first] > h[e.second]) std::swap(e.first, e.second);

  for (std::size_t x = 0; x < n; ++x) {
    const Addr& a = tr.vertices[x];
    bool b = h[x].is_limit() || g.has_upper_neighbour_beyond_children(a);
    if (!b) {
      const Card kids = t.child_count(a);
      if (!kids || *kids > 4096) {
        b = true;
      } else {
        for (const Addr& c : t.children(a, 0, *kids))
          if (!tr.find(c)) {
            b = true;
            break;
          }
      }
    }
    tr.boundary[x] = b;
  }
  return tr;
}

std::vector<Addr> interval_closure(const TGraph& g, std::vector<Addr> nodes, std::size_t cap) {
  const OrderTree& t = g.tree();
  std::set<std::string> seen;
  for (const Addr& a : nodes) seen.insert(to_string(a));
  auto push = [&](const Addr& a) {
    if (seen.insert(to_string(a)).second) {
      if (nodes.size() >= cap) throw Error(ErrorCode::TooLarge, "truncation closure exceeds node cap");
      nodes.push_back(a);
      return true;
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Addr y = nodes[i];
      const Ordinal hy = t.height(y);
      if (hy.is_successor()) {
        changed |= push(t.pred(y));
        continue;
      }
      if (!hy.is_limit()) continue;
      std::set<Ordinal> need;
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (j != i && t.lt(nodes[j], y)) need.insert(t.height(nodes[j]));
      for (const Ordinal& lo : need) changed |= push(g.least_down_neighbour_from(y, lo));
    }
  }
  return nodes;
}

FiniteTruncation truncate(const TGraph& g, const TruncBounds& b) {
  std::vector<Addr> nodes = interval_closure(g, g.tree().enumerate(b), 4 * b.max_nodes);
  std::ostringstream prov;
  prov << g.describe() << " depth=" << b.depth << " breadth=" << b.breadth;
  return induced(g, nodes, prov.str());
}

std::string to_dot(const FiniteTruncation& tr, const std::function<std::string(std::size_t)>& attrs) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "graph truncation {\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << "  " << quote(tr.names[i]);
    std::string a = attrs ? attrs(i) : "";
    if (tr.boundary[i]) a += std::string(a.empty() ? "" : ", ") + "style=dashed";
    if (!a.empty()) os << " [" << a << "]";
    os << ";\n";
  }
  for (const auto& [x, y] : tr.edges) os << "  " << quote(tr.names[x]) << " -- " << quote(tr.names[y]) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace endspace
