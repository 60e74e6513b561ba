#include "endspace/order_tree.hpp"

namespace endspace {

std::vector<Addr> TopSet::first(std::uint64_t k) const {
  std::vector<Addr> out;
  const std::uint64_t n = count ? std::min(*count, k) : k;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

TopSet TopSet::single(Addr a) {
  return {1, [a = std::move(a)](std::uint64_t) { return a; }};
}

TopSet TopSet::join(TopSet a, TopSet b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.count && b.count) {
    const std::uint64_t na = *a.count;
    return {na + *b.count, [a, b, na](std::uint64_t i) { return i < na ? a.at(i) : b.at(i - na); }};
  }
  if (a.count || b.count) {
    const TopSet& fin = a.count ? a : b;
    const TopSet& inf = a.count ? b : a;
    const std::uint64_t nf = *fin.count;
    return {std::nullopt, [fin, inf, nf](std::uint64_t i) { return i < nf ? fin.at(i) : inf.at(i - nf); }};
  }
  return {std::nullopt, [a, b](std::uint64_t i) { return i % 2 ? b.at(i / 2) : a.at(i / 2); }};
}

TopSet TopSet::prefixed(const Addr& pre) const {
  if (empty()) return {};
  return {count, [f = at, pre](std::uint64_t i) { return concat(pre, f(i)); }};
}

bool within_depth(const Ordinal& h, std::uint64_t depth) {
  for (const Term& t : h.terms())
    if (t.exp > depth || t.coef > depth) return false;
  return true;
}

NodeKind OrderTree::kind(const Addr& a) const {
  switch (height(a).kind()) {
    case OrdinalKind::Zero: return NodeKind::Root;
    case OrdinalKind::Successor: return NodeKind::Successor;
    case OrdinalKind::Limit: return NodeKind::Limit;
  }
  return NodeKind::Root;
}

Addr OrderTree::pred(const Addr& a) const {
  const Ordinal h = height(a);
  if (!h.is_successor()) throw Error(ErrorCode::InvalidAddress, to_string(a) + " is not a successor");
  return ancestor(a, h.predecessor());
}

RayComparison OrderTree::compare(const HighRay& r1, const HighRay& r2) const {
  if (r1 == r2) return {RayRelation::Equal, order_type(r1)};
  const Ordinal m = meet(r1, r2);
  if (m == order_type(r1)) return {RayRelation::FirstInSecond, m};
  if (m == order_type(r2)) return {RayRelation::SecondInFirst, m};
  return {RayRelation::Incomparable, m};
}

std::optional<Addr> OrderTree::node_at_if(const HighRay& r, const Ordinal& h) const {
  if (h >= order_type(r)) return std::nullopt;
  return node_at(r, h);
}

}  // namespace endspace
