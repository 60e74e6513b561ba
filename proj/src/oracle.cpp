#include "endspace/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace endspace {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::vector<std::size_t> labels_minus(const FiniteTruncation& tr, const std::vector<char>& removed) {
  std::vector<std::size_t> label(tr.size(), kNone);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < tr.size(); ++s) {
    if (removed[s] || label[s] != kNone) continue;
    label[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : tr.adj[v])
        if (!removed[u] && label[u] == kNone) {
          label[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return label;
}

std::vector<char> mask_of(const FiniteTruncation& tr, const std::vector<Addr>& x) {
  std::vector<char> m(tr.size(), 0);
  for (const Addr& a : x)
    if (auto i = tr.find(a)) m[*i] = 1;
  return m;
}

// A set V (the up-closure of `node`, strict for limits) whose certified
// neighbourhood lies inside X: no path of G - X leaves V.
struct Seal {
  Addr node;
  bool strict = false;
};

std::vector<Seal> seals_for(const TGraph& g, const FiniteTruncation& tr, const std::vector<Addr>& x,
                            const std::vector<char>& mask) {
  const OrderTree& t = g.tree();
  std::set<std::string> xs;
  for (const Addr& a : x) xs.insert(to_string(a));
  auto inside = [&](const std::optional<std::vector<Addr>>& cert) {
    if (!cert) return false;
    return std::all_of(cert->begin(), cert->end(), [&](const Addr& a) { return xs.count(to_string(a)) > 0; });
  };
  std::vector<Seal> out;
  for (std::size_t v = 0; v < tr.size(); ++v) {
    const Addr& a = tr.vertices[v];
    const NodeKind k = t.kind(a);
    if (k == NodeKind::Successor) {
      auto p = tr.find(t.pred(a));
      if (p && mask[*p] && inside(g.upset_neighbourhood(a))) out.push_back({a, false});
    } else if (k == NodeKind::Limit && mask[v] && inside(g.strict_upset_neighbourhood(a))) {
      out.push_back({a, true});
    }
  }
  return out;
}

bool in_seal(const OrderTree& t, const Seal& s, const Addr& v) { return s.strict ? t.lt(s.node, v) : t.le(s.node, v); }

std::size_t last_free(const FiniteTruncation& tr, const std::vector<Addr>& path, const std::vector<char>& mask) {
  for (std::size_t i = path.size(); i-- > 0;) {
    auto v = tr.find(path[i]);
    if (!v) throw Error(ErrorCode::PrefixNotInTruncation, to_string(path[i]) + " is not in the truncation");
    if (!mask[*v]) return *v;
  }
  throw Error(ErrorCode::PrefixNotInTruncation, "prefix lies inside the deleted set");
}

Json names_json(const std::vector<Addr>& x) {
  Json out = Json::array();
  for (const Addr& a : x) out.push_back(to_string(a));
  return out;
}

}  // namespace

std::vector<Component> components_minus(const FiniteTruncation& tr, const std::vector<std::size_t>& x) {
  std::vector<char> removed(tr.size(), 0);
  for (std::size_t v : x) removed.at(v) = 1;
  const auto label = labels_minus(tr, removed);
  std::vector<Component> out;
  for (std::size_t v = 0; v < tr.size(); ++v) {
    if (label[v] == kNone) continue;
    if (label[v] >= out.size()) out.resize(label[v] + 1);
    out[label[v]].vertices.push_back(v);
    out[label[v]].boundary = out[label[v]].boundary || tr.boundary[v];
  }
  return out;
}

std::vector<Component> components_minus(const FiniteTruncation& tr, const std::vector<Addr>& x) {
  std::vector<std::size_t> idx;
  for (const Addr& a : x) {
    auto i = tr.find(a);
    if (!i) throw Error(ErrorCode::InvalidAddress, to_string(a) + " is not in the truncation");
    idx.push_back(*i);
  }
  return components_minus(tr, idx);
}

bool separated(const TGraph& g, const FiniteTruncation& tr, const std::vector<Addr>& p, const std::vector<Addr>& q,
               const std::vector<Addr>& x) {
  const auto mask = mask_of(tr, x);
  const std::size_t a = last_free(tr, p, mask), b = last_free(tr, q, mask);
  const auto label = labels_minus(tr, mask);
  if (label[a] == label[b]) return false;
  auto boundary_free = [&](std::size_t l) {
    for (std::size_t v = 0; v < tr.size(); ++v)
      if (label[v] == l && tr.boundary[v]) return false;
    return true;
  };
  if (boundary_free(label[a]) || boundary_free(label[b])) return true;
  const OrderTree& t = g.tree();
  for (const Seal& s : seals_for(g, tr, x, mask))
    if (in_seal(t, s, tr.vertices[a]) != in_seal(t, s, tr.vertices[b])) return true;
  return false;
}

Verdict oracle_converges(const TGraph& g, const SequenceTemplate& seq, const HighRay& target, std::size_t depth) {
  const OrderTree& t = g.tree();
  if (depth < 16) return Verdict::unknown("depth too small for the oracle", depth);
  const std::size_t count = depth, len = depth, fam = depth / 16;
  t.check_ray(target);
  const Ordinal lam = t.order_type(target);

  std::vector<HighRay> rays;
  for (std::size_t n = 0; n < count; ++n) {
    rays.push_back(seq.at(n));
    t.check_ray(rays.back());
  }
  std::vector<Addr> nodes = realize_ray(g, target, len);
  const std::vector<Addr> target_path = nodes;
  std::vector<std::vector<Addr>> paths;
  for (const HighRay& r : rays) {
    paths.push_back(realize_ray(g, r, len));
    nodes.insert(nodes.end(), paths.back().begin(), paths.back().end());
  }

  // Separator generators along the target: successors above its first
  // cofinal points, and tops met by the early rays.
  std::vector<Addr> succs, tops;
  for (std::size_t i = 0; i < fam; ++i) succs.push_back(t.node_at(target, cofinal_element(lam, i).successor()));
  // and just above the lowest points where early rays leave the target
  std::set<Ordinal> meets;
  for (std::size_t n = 0; n < count / 2; ++n) {
    const SplitPoint sp = split_point(t, target, rays[n]);
    if (!sp.a_side && sp.meet.successor() < lam) meets.insert(sp.meet);
  }
  for (auto it = meets.begin(); it != meets.end() && std::distance(meets.begin(), it) < std::ptrdiff_t(fam); ++it)
    succs.push_back(t.node_at(target, it->successor()));
  std::set<std::string> seen_tops;
  for (std::size_t n = 0; n < count / 2 && tops.size() < fam; ++n) {
    if (!(t.order_type(rays[n]) > lam)) continue;
    const Addr tau = t.node_at(rays[n], lam);
    if (t.kind(tau) != NodeKind::Limit) continue;
    if (t.compare(t.downset(tau), target).relation != RayRelation::Equal) continue;
    if (seen_tops.insert(to_string(tau)).second) tops.push_back(tau);
  }
  nodes.insert(nodes.end(), succs.begin(), succs.end());
  nodes.insert(nodes.end(), tops.begin(), tops.end());
  const FiniteTruncation tr = induced(g, nodes, "oracle depth=" + std::to_string(depth));

  std::vector<std::vector<Addr>> family;
  for (const Addr& s : succs)
    if (auto c = g.upset_neighbourhood(s)) family.push_back(*c);
  for (const Addr& tau : tops)
    if (auto c = g.strict_upset_neighbourhood(tau)) family.push_back(*c);
  std::vector<Addr> core(target_path.begin(), target_path.begin() + std::min<std::size_t>(4, target_path.size()));
  core.insert(core.end(), tops.begin(), tops.end());
  for (std::size_t i = 0; i < core.size(); ++i) {
    family.push_back({core[i]});
    for (std::size_t j = i + 1; j < core.size(); ++j) family.push_back({core[i], core[j]});
  }

  const std::size_t window = count / 2, late = count - count / 4;
  bool all_inside = true;
  std::size_t conflicts = 0;
  std::optional<Verdict> diverging;
  for (const auto& x : family) {
    const auto mask = mask_of(tr, x);
    const auto label = labels_minus(tr, mask);
    const auto seals = seals_for(g, tr, x, mask);
    // A realized ray continues along its own chain, so its tail stays clear
    // of X once no member of X lies on that chain above the current vertex.
    auto clear = [&](const HighRay& r, std::size_t v) {
      const Ordinal h = t.height(tr.vertices[v]);
      return std::none_of(x.begin(), x.end(), [&](const Addr& a) { return t.height(a) > h && t.contains(r, a); });
    };
    const std::size_t te = last_free(tr, target_path, mask);
    std::vector<std::uint64_t> outside;
    std::size_t undecided = 0, out_window = 0;
    bool out_late = false;
    for (std::size_t n = 0; n < count; ++n) {
      const std::size_t tn = last_free(tr, paths[n], mask);
      bool out = false;
      for (const Seal& s : seals) out |= t.contains(rays[n], s.node) != t.contains(target, s.node);
      const bool in = label[tn] == label[te] && clear(rays[n], tn) && clear(target, te);
      conflicts += out && in;
      if (out) {
        if (outside.size() < 8) outside.push_back(n);
        if (n >= window) ++out_window;
        out_late |= n >= late;
      } else if (!in && n >= window) {
        ++undecided;
      }
    }
    if (out_window >= 2 && out_late && !diverging)
      diverging = Verdict::diverges("infinitely many rays tail outside the target's component",
                                    {{"X", names_json(x)}, {"outside", outside}});
    if (out_window || undecided) all_inside = false;
  }
  if (conflicts) return Verdict::unknown("truncation contradicts a certified seal", depth);
  if (diverging) return *diverging;
  if (all_inside) return Verdict::converges("late rays share the target's component for every separator");
  return Verdict::unknown("separators not decided within the truncation", depth);
}

}  // namespace endspace
