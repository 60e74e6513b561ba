#include "endspace/endspace.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace endspace {

namespace {

std::uint64_t max_literal(const Expr& e) {
  std::uint64_t m = e.kind == ExprKind::Number ? e.number : 0;
  for (const Arg& a : e.args) m = std::max(m, max_literal(*a.value));
  return m;
}

void collect_periods(const HighRay& r, std::vector<std::size_t>& out) {
  if (const auto* s = std::get_if<Stream>(&r.tail)) out.push_back(s->period().size());
  for (const Token& t : r.route)
    if (t.ray) collect_periods(*t.ray, out);
}

// Least successor height >= m.
Ordinal successor_at_or_above(const Ordinal& m) { return m.is_successor() ? m : m.successor(); }


}  // namespace

std::string Verdict::name() const {
  switch (kind) {
    case VerdictKind::Converges: return "Converges";
    case VerdictKind::Diverges: return "Diverges";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

Json Verdict::to_json() const {
  Json j;
  j["verdict"] = name();
  j["reason"] = reason;
  if (kind == VerdictKind::Unknown) j["depth"] = depth;
  if (!witness.empty()) j["witness"] = witness;
  return j;
}

bool contradicts(const Verdict& a, const Verdict& b) { return a.decided() && b.decided() && a.kind != b.kind; }

std::vector<Addr> realize_ray(const TGraph& g, const HighRay& r, std::size_t k) {
  const OrderTree& t = g.tree();
  t.check_ray(r);
  const Ordinal lam = t.order_type(r);
  std::vector<Addr> path;
  if (k == 0) return path;
  Addr cur = t.node_at(r, 0);
  path.push_back(cur);
  for (std::uint64_t i = 0; path.size() < k; ++i) {
    const Ordinal target = cofinal_element(lam, i);
    const Ordinal lo = t.height(cur);
    if (target <= lo) continue;
    // Walk down from the next cofinal point inside the interval, then reverse.
    std::vector<Addr> seg;
    for (Addr y = t.node_at(r, target); !(y == cur);) {
      seg.push_back(y);
      y = t.height(y).is_successor() ? t.pred(y) : g.least_down_neighbour_from(y, lo);
    }
    for (auto it = seg.rbegin(); it != seg.rend() && path.size() < k; ++it) path.push_back(*it);
    cur = seg.front();
  }
  return path;
}

SplitPoint split_point(const OrderTree& t, const HighRay& target, const HighRay& ray_n) {
  const RayComparison c = t.compare(target, ray_n);
  SplitPoint p;
  if (c.relation == RayRelation::FirstInSecond) {
    p.a_side = true;
    p.top = t.node_at(ray_n, t.order_type(target));
  }
  p.meet = c.meet;
  return p;
}

namespace {

using SideKey = std::function<std::optional<std::string>(const SplitPoint&, const HighRay&)>;

Verdict converges_keyed(const OrderTree& t, const SequenceTemplate& seq, const HighRay& target, const SideKey& key,
                        const char* key_name, const std::function<std::uint64_t(const HighRay&)>& key_period = {}) {
  t.check_ray(target);
  const Ordinal lam = t.order_type(target);
  auto instance = [&](std::uint64_t n) {
    HighRay r;
    try {
      r = seq.at(n);
      t.check_ray(r);
    } catch (const Error& e) {
      throw Error(ErrorCode::TemplateOutsideTree,
                  "instance n=" + std::to_string(n) + " of " + seq.to_string() + ": " + e.what());
    }
    return r;
  };
  instance(0);
  if (!seq.affine()) return Verdict::unknown("template is not affine in n", 0);

  // Residue classes modulo every period in sight behave affinely far out.
  std::vector<std::size_t> periods;
  collect_periods(target, periods);
  const std::uint64_t probe = 2 * max_literal(seq.expr()) + 64;
  collect_periods(instance(probe), periods);
  collect_periods(instance(probe + 1), periods);
  std::uint64_t mod = 1;
  for (std::size_t p : periods) mod = std::lcm(mod, static_cast<std::uint64_t>(p));
  if (key_period) mod = std::lcm(mod, key_period(instance(probe)));
  if (mod > 64) return Verdict::unknown("period modulus too large", 0);
  const std::uint64_t base = (probe / mod + 1) * mod;

  for (std::uint64_t r = 0; r < mod; ++r) {
    std::vector<SplitPoint> pts;
    std::vector<HighRay> rays;
    for (std::uint64_t j = 0; j < 4; ++j) {
      rays.push_back(instance(base + r + j * mod));
      pts.push_back(split_point(t, target, rays.back()));
    }
    Json where{{"residue", r}, {"modulus", mod}};
    const bool a_side = pts[0].a_side;
    for (const auto& p : pts)
      if (p.a_side != a_side) return Verdict::unknown("side not stable on residue " + std::to_string(r), 0);

    if (a_side) {
      std::vector<std::string> keys;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto k = key(pts[i], rays[i]);
        if (!k) return Verdict::unknown(std::string("no certified ") + key_name, 0);
        keys.push_back(std::move(*k));
      }
      bool all_same = true, all_distinct = true;
      for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t k = i + 1; k < keys.size(); ++k) {
          const bool eq = keys[i] == keys[k];
          all_same &= eq;
          all_distinct &= !eq;
        }
      if (all_same) {
        where["side"] = "A";
        where["top"] = to_string(pts[0].top);
        where[key_name] = keys[0];
        return Verdict::diverges(std::string("infinitely many rays share one ") + key_name, where);
      }
      if (!all_distinct) return Verdict::unknown(std::string(key_name) + " neither constant nor injective", 0);
      continue;
    }

    const bool constant = std::all_of(pts.begin(), pts.end(), [&](const SplitPoint& p) { return p.meet == pts[0].meet; });
    if (constant) {
      if (pts[0].meet == lam) continue;  // eventually the target itself
      const Ordinal h = successor_at_or_above(pts[0].meet);
      where["side"] = "B";
      where["successor"] = to_string(t.node_at(target, h));
      where["height"] = h.to_string();
      return Verdict::diverges("common parts stay below a successor of the target", where);
    }
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i - 1].meet < pts[i].meet)) return Verdict::unknown("common parts not monotone", 0);
    const Ordinal sup = affine_supremum(pts[1].meet, pts[2].meet);
    if (!(sup == affine_supremum(pts[2].meet, pts[3].meet)))
      return Verdict::unknown("common parts not affine", 0);
    if (sup < lam) {
      const Ordinal h = sup.successor();
      where["side"] = "B";
      where["successor"] = to_string(t.node_at(target, h));
      where["height"] = h.to_string();
      return Verdict::diverges("common parts accumulate below the target", where);
    }
  }
  return Verdict::converges("criteria hold on every residue class");
}

}  // namespace

Verdict converges(const OrderTree& t, const SequenceTemplate& seq, const HighRay& target) {
  return converges_keyed(
      t, seq, target, [](const SplitPoint& p, const HighRay&) { return std::optional(to_string(p.top)); }, "top");
}

Verdict converges_by_adhesion(const TGraph& g, const SequenceTemplate& seq, const HighRay& target) {
  const OrderTree& t = g.tree();
  auto key = [&](const SplitPoint& p, const HighRay& r) -> std::optional<std::string> {
    auto n = g.upset_neighbourhood(t.node_at(r, t.height(p.top).successor()));
    if (!n) return std::nullopt;
    std::vector<std::string> names;
    for (const Addr& a : *n) names.push_back(to_string(a));
    std::sort(names.begin(), names.end());
    std::string s;
    for (const auto& x : names) s += x + " ";
    return s;
  };
  auto period = [&](const HighRay& r) -> std::uint64_t {
    const SplitPoint p = split_point(t, target, r);
    if (!p.a_side || t.kind(p.top) != NodeKind::Limit) return 1;
    const auto c = g.successor_classes(p.top);
    return c ? c->period : 1;
  };
  return converges_keyed(t, seq, target, key, "neighbourhood", period);
}

HomeoMap homeo_map(const TGraph& g1, const TGraph& g2) {
  const std::string a = g1.tree().describe(), b = g2.tree().describe();
  if (a != b) throw Error(ErrorCode::SpecMismatch, "graphs live on different trees: " + a + " vs " + b);
  return HomeoMap{a};
}

}  // namespace endspace
