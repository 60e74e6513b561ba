#include "endspace/transform.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "endspace/dsl.hpp"
#include "endspace/oracle.hpp"

namespace endspace {

namespace {

std::vector<Addr> sorted(std::vector<Addr> xs) {
  std::sort(xs.begin(), xs.end(), AddrLess{});
  return xs;
}

std::vector<Addr> certified_upset(const TGraph& g, const Addr& s) {
  auto n = g.upset_neighbourhood(s);
  if (!n) throw Error(ErrorCode::NotFiniteAdhesion, "N(up-closure of " + to_string(s) + ") is not certified finite");
  return sorted(std::move(*n));
}

struct ScannedClasses {
  std::vector<std::vector<Addr>> classes;
  std::vector<std::vector<std::uint64_t>> members;
  std::map<std::vector<Addr>, std::uint64_t, std::function<bool(const std::vector<Addr>&, const std::vector<Addr>&)>>
      index{[](const std::vector<Addr>& a, const std::vector<Addr>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), AddrLess{});
      }};
};

}  // namespace

SuccessorClasses successor_classes_of(const TGraph& g, const Addr& limit) {
  if (auto c = g.successor_classes(limit)) return *c;
  const OrderTree& t = g.tree();
  const Card n = t.child_count(limit);
  if (!n)
    throw Error(ErrorCode::NotFiniteAdhesion,
                to_string(limit) + " has infinitely many successors and no class certificate");
  auto sc = std::make_shared<ScannedClasses>();
  for (std::uint64_t i = 0; i < *n; ++i) {
    auto x = certified_upset(g, t.children(limit, i, i + 1).at(0));
    auto [it, fresh] = sc->index.emplace(x, sc->classes.size());
    if (fresh) {
      sc->classes.push_back(std::move(x));
      sc->members.emplace_back();
    }
    sc->members[it->second].push_back(i);
  }
  SuccessorClasses c;
  c.count = sc->classes.size();
  c.at = [sc](std::uint64_t k) { return sc->classes.at(k); };
  c.find = [sc](const std::vector<Addr>& x) -> std::optional<std::uint64_t> {
    auto it = sc->index.find(x);
    if (it == sc->index.end()) return std::nullopt;
    return it->second;
  };
  c.size = [sc](std::uint64_t k) -> Card { return sc->members.at(k).size(); };
  c.member = [sc](std::uint64_t k, std::uint64_t r) { return sc->members.at(k).at(r); };
  return c;
}

// ------------------------------------------------------------------ SplitTree

SplitTree::SplitTree(std::shared_ptr<const TGraph> g) : g_(std::move(g)) {}

SuccessorClasses SplitTree::classes(const Addr& limit) const {
  const std::string key = to_string(limit);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  SuccessorClasses c = successor_classes_of(*g_, limit);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(c)).first->second;
}

bool SplitTree::split_limit(const Addr& a) const {
  if (base().kind(a) != NodeKind::Limit) return false;
  const Card c = base().child_count(a);
  return !c || *c > 0;
}

Addr SplitTree::phi(const Addr& a) const { return is_vnode(a) ? *a[0].node : a; }

Addr SplitTree::vnode(const Addr& limit, const Addr& successor) const {
  return {Token::split(limit, certified_upset(*g_, successor))};
}

Addr SplitTree::lift(const Addr& a, const Addr& above) const {
  if (!split_limit(a)) return a;
  const Addr top = phi(above);
  if (a == top) return above;
  return vnode(a, base().ancestor(top, base().height(a).successor()));
}

void SplitTree::check_addr(const Addr& a) const {
  if (is_vnode(a)) {
    const Addr& l = *a[0].node;
    base().check_addr(l);
    if (!split_limit(l) || !classes(l).find(*a[0].set))
      throw Error(ErrorCode::InvalidAddress, to_string(a) + " is not a class of successors");
    return;
  }
  base().check_addr(a);
  if (split_limit(a)) throw Error(ErrorCode::InvalidAddress, to_string(a) + " is split into v-nodes");
}

bool SplitTree::le(const Addr& a, const Addr& b) const {
  const Addr pa = phi(a), pb = phi(b);
  if (!base().le(pa, pb)) return false;
  if (!is_vnode(a)) return true;
  if (pa == pb) return a == b;
  return lift(pa, b) == a;
}

Addr SplitTree::ancestor(const Addr& a, const Ordinal& h) const {
  const Addr pa = phi(a);
  const Addr b = base().ancestor(pa, h);
  return b == pa ? a : lift(b, a);
}

std::vector<Addr> SplitTree::children(const Addr& a, std::uint64_t lo, std::uint64_t hi) const {
  if (!is_vnode(a)) return base().children(a, lo, hi);
  const Addr& l = *a[0].node;
  const auto c = classes(l);
  const auto k = c.find(*a[0].set);
  if (!k) throw Error(ErrorCode::InvalidAddress, to_string(a) + " is not a class of successors");
  const Card size = c.size(*k);
  if (size) hi = std::min<std::uint64_t>(hi, *size);
  std::vector<Addr> out;
  for (std::uint64_t r = lo; r < hi; ++r) {
    const std::uint64_t i = c.member(*k, r);
    out.push_back(base().children(l, i, i + 1).at(0));
  }
  return out;
}

Card SplitTree::child_count(const Addr& a) const {
  if (!is_vnode(a)) return base().child_count(a);
  const auto c = classes(*a[0].node);
  const auto k = c.find(*a[0].set);
  if (!k) throw Error(ErrorCode::InvalidAddress, to_string(a) + " is not a class of successors");
  return c.size(*k);
}

std::optional<Ordinal> SplitTree::min_limit_above(const Addr& a) const {
  if (!is_vnode(a)) return base().min_limit_above(a);
  // An infinite class is judged by its first 16 members.
  std::optional<Ordinal> best;
  for (const Addr& s : children(a, 0, 16)) {
    auto m = base().min_limit_above(s);
    if (m && (!best || *m < *best)) best = m;
  }
  return best;
}

std::vector<Addr> SplitTree::enumerate(const TruncBounds& b) const {
  std::vector<Addr> out;
  for (const Addr& x : base().enumerate(b)) {
    if (!split_limit(x)) {
      out.push_back(x);
      continue;
    }
    const auto c = classes(x);
    const std::uint64_t n = c.count ? std::min<std::uint64_t>(*c.count, b.breadth) : b.breadth;
    for (std::uint64_t k = 0; k < n; ++k) out.push_back({Token::split(x, c.at(k))});
  }
  return out;
}

Addr SplitTree::node_at(const HighRay& r, const Ordinal& h) const {
  const Addr a = base().node_at(r, h);
  return split_limit(a) ? vnode(a, base().node_at(r, h.successor())) : a;
}

bool SplitTree::contains(const HighRay& r, const Addr& a) const {
  if (!is_vnode(a)) return base().contains(r, a);
  const Addr& l = *a[0].node;
  return base().contains(r, l) && node_at(r, base().height(l)) == a;
}

Ordinal SplitTree::meet(const HighRay& r1, const HighRay& r2) const {
  const Ordinal m = base().meet(r1, r2);
  if (!m.is_successor()) return m;
  const Ordinal h = m.predecessor();
  const Addr x = base().node_at(r1, h);
  if (split_limit(x) && !(node_at(r1, h) == node_at(r2, h))) return h;
  return m;
}

TopSet SplitTree::tops(const HighRay& r) const {
  const TopSet ts = base().tops(r);
  if (ts.empty()) return ts;
  struct Expanded {
    TopSet ts;
    const SplitTree* tree;
    Card width(std::uint64_t p) const {
      const Addr tau = ts.at(p);
      return tree->split_limit(tau) ? tree->classes(tau).count : Card(1);
    }
    Addr get(std::uint64_t p, std::uint64_t q) const {
      const Addr tau = ts.at(p);
      return tree->split_limit(tau) ? Addr{Token::split(tau, tree->classes(tau).at(q))} : tau;
    }
  };
  auto e = std::make_shared<Expanded>(Expanded{ts, this});
  // finite total: lexicographic; otherwise diagonal over (top, class)
  Card total = 0;
  if (ts.count) {
    std::uint64_t sum = 0;
    for (std::uint64_t p = 0; p < *ts.count && total; ++p) {
      const Card w = e->width(p);
      if (!w) total = std::nullopt;
      else sum += *w;
    }
    if (total) total = sum;
  } else {
    total = std::nullopt;
  }
  if (total) {
    return {total, [e](std::uint64_t i) {
              for (std::uint64_t p = 0;; ++p) {
                const std::uint64_t w = *e->width(p);
                if (i < w) return e->get(p, i);
                i -= w;
              }
            }};
  }
  const Card np = ts.count;
  return {std::nullopt, [e, np](std::uint64_t i) {
            for (std::uint64_t d = 0;; ++d)
              for (std::uint64_t p = 0; p <= d; ++p) {
                if (np && p >= *np) break;
                const Card w = e->width(p);
                const std::uint64_t q = d - p;
                if (w && q >= *w) continue;
                if (i-- == 0) return e->get(p, q);
              }
          }};
}

std::optional<HighRay> SplitTree::least_ray_through(const Addr& a) const {
  if (!is_vnode(a)) return base().least_ray_through(a);
  const auto kids = children(a, 0, 1);
  if (kids.empty()) return std::nullopt;
  return base().least_ray_through(kids[0]);
}

// ----------------------------------------------------------------- SplitGraph

std::vector<Addr> SplitGraph::lift_all(const std::vector<Addr>& xs, const Addr& above) const {
  std::vector<Addr> out;
  for (const Addr& x : xs) out.push_back(t_->lift(x, above));
  return out;
}

std::vector<Addr> SplitGraph::down_neighbours(const Addr& a, std::size_t count) const {
  return lift_all(t_->graph().down_neighbours(t_->phi(a), count), a);
}

Addr SplitGraph::least_down_neighbour_from(const Addr& a, const Ordinal& h) const {
  return t_->lift(t_->graph().least_down_neighbour_from(t_->phi(a), h), a);
}

std::vector<Addr> SplitGraph::down_neighbours_upto(const Addr& a, const Ordinal& h) const {
  return lift_all(t_->graph().down_neighbours_upto(t_->phi(a), h), a);
}

bool SplitGraph::adjacent(const Addr& a, const Addr& b) const {
  return t_->comparable(a, b) && t_->graph().adjacent(t_->phi(a), t_->phi(b));
}

bool SplitGraph::has_upper_neighbour_beyond_children(const Addr& a) const {
  return t_->graph().has_upper_neighbour_beyond_children(t_->phi(a));
}

std::optional<std::vector<Addr>> SplitGraph::upset_neighbourhood(const Addr& s) const {
  if (t_->is_vnode(s)) throw Error(ErrorCode::LimitNode, "up-closure neighbourhoods are for non-limit nodes");
  auto n = t_->graph().upset_neighbourhood(s);
  if (!n) return std::nullopt;
  return lift_all(*n, s);
}

std::optional<std::vector<Addr>> SplitGraph::strict_upset_neighbourhood(const Addr& t) const {
  if (t_->is_vnode(t)) return lift_all(*t[0].set, t);
  auto n = t_->graph().strict_upset_neighbourhood(t);
  if (!n) return std::nullopt;
  return lift_all(*n, t);
}

std::vector<Addr> SplitGraph::witness_set(const Addr& t) const {
  if (!t_->height(t).is_limit()) throw Error(ErrorCode::InvalidAddress, to_string(t) + " is not a limit");
  if (!t_->is_vnode(t)) return lift_all(adhesion_witness(t_->graph(), t).set, t);
  std::vector<Addr> out;
  for (const Addr& x : *t[0].set)
    if (!(x == *t[0].node)) out.push_back(t_->lift(x, t));
  return out;
}

SplitResult split(std::shared_ptr<const TGraph> g) {
  SplitResult r;
  r.tree = std::make_shared<SplitTree>(std::move(g));
  r.graph = std::make_shared<SplitGraph>(r.tree);
  return r;
}

// ------------------------------------------------------------------ transport

Report transport_check(const TGraph& g, const SplitGraph& gp, const std::vector<TransportSample>& samples,
                       std::size_t oracle_depth) {
  Report rep;
  for (const auto& s : samples) {
    const auto seq = SequenceTemplate::parse(s.seq);
    auto guarded = [](auto&& f) {
      try {
        return f();
      } catch (const Error& e) {
        return Verdict::unknown(e.what(), 0);
      }
    };
    const Verdict v[4] = {
        guarded([&] { return converges(gp.tree(), seq, s.target); }),
        guarded([&] { return converges_by_adhesion(g, seq, Phi(s.target)); }),
        guarded([&] { return oracle_converges(gp, seq, s.target, oracle_depth); }),
        guarded([&] { return oracle_converges(g, seq, Phi(s.target), oracle_depth); }),
    };
    std::optional<VerdictKind> seen;
    bool agree = true;
    for (const Verdict& x : v) {
      if (!x.decided()) continue;
      if (seen && *seen != x.kind) agree = false;
      seen = x.kind;
    }
    rep.check("transport", agree,
              {{"seq", s.seq},
               {"target", ray_to_dsl(s.target)},
               {"split_exact", v[0].name()},
               {"adhesion_exact", v[1].name()},
               {"split_oracle", v[2].name()},
               {"oracle", v[3].name()}});
  }
  return rep;
}

std::string split_dot(const SplitGraph& gp, const FiniteTruncation& tr) {
  const SplitTree& t = gp.split_tree();
  return to_dot(tr, [&](std::size_t i) { return t.is_vnode(tr.vertices[i]) ? std::string("shape=box, color=red") : ""; });
}

}  // namespace endspace
