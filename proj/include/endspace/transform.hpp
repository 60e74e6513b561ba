#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>

#include "endspace/endspace.hpp"
#include "endspace/report.hpp"
#include "endspace/tgraph.hpp"

namespace endspace {

/// Successor classes of a limit: the graph's own certificate, or a scan when
/// the limit has finitely many successors. Throws NotFiniteAdhesion otherwise.
SuccessorClasses successor_classes_of(const TGraph& g, const Addr& limit);

/// T' over T: every limit l with successors is replaced by one limit v(l,X)
/// per class X of its successors, and the successors in class X sit above
/// v(l,X). Other nodes keep their addresses; v-nodes are single Split tokens.
/// High-rays of T' and T share descriptors, so Phi is the identity on them.
class SplitTree : public OrderTree {
 public:
  explicit SplitTree(std::shared_ptr<const TGraph> g);

  const OrderTree& base() const { return g_->tree(); }
  const TGraph& graph() const { return *g_; }
  /// l has successors in T.
  bool split_limit(const Addr& a) const;
  bool is_vnode(const Addr& a) const { return a.size() == 1 && a[0].kind == TokenKind::Split; }
  Addr phi(const Addr& a) const;
  /// The T'-node over `a` on the chain below `above` (a <= phi(above) in T).
  Addr lift(const Addr& a, const Addr& above) const;
  SuccessorClasses classes(const Addr& limit) const;

  std::string describe() const override { return "split(" + base().describe() + ")"; }
  Addr root() const override { return base().root(); }
  void check_addr(const Addr& a) const override;
  Ordinal height(const Addr& a) const override { return base().height(phi(a)); }
  bool le(const Addr& a, const Addr& b) const override;
  Addr ancestor(const Addr& a, const Ordinal& h) const override;
  std::vector<Addr> children(const Addr& a, std::uint64_t lo, std::uint64_t hi) const override;
  Card child_count(const Addr& a) const override;
  std::optional<Ordinal> min_limit_above(const Addr& a) const override;
  Ordinal tree_height() const override { return base().tree_height(); }
  std::vector<Addr> enumerate(const TruncBounds& b) const override;
  void check_ray(const HighRay& r) const override { base().check_ray(r); }
  Ordinal order_type(const HighRay& r) const override { return base().order_type(r); }
  Addr node_at(const HighRay& r, const Ordinal& h) const override;
  bool contains(const HighRay& r, const Addr& a) const override;
  Ordinal meet(const HighRay& r1, const HighRay& r2) const override;
  TopSet tops(const HighRay& r) const override;
  HighRay downset(const Addr& limit) const override { return base().downset(phi(limit)); }
  std::optional<HighRay> least_ray_through(const Addr& a) const override;
  bool has_rays() const override { return base().has_rays(); }
  HighRay random_ray(Rng& rng, unsigned budget) const override { return base().random_ray(rng, budget); }

 private:
  Addr vnode(const Addr& limit, const Addr& successor) const;
  std::shared_ptr<const TGraph> g_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, SuccessorClasses> cache_;
};

/// G' on T': a'b' is an edge iff a', b' are comparable and phi(a')phi(b') is an edge of G.
class SplitGraph : public TGraph {
 public:
  explicit SplitGraph(std::shared_ptr<const SplitTree> t) : t_(std::move(t)) {}

  const OrderTree& tree() const override { return *t_; }
  const SplitTree& split_tree() const { return *t_; }
  std::string describe() const override { return "split-graph " + t_->graph().describe(); }
  std::vector<Addr> down_neighbours(const Addr& a, std::size_t count) const override;
  Addr least_down_neighbour_from(const Addr& a, const Ordinal& h) const override;
  std::vector<Addr> down_neighbours_upto(const Addr& a, const Ordinal& h) const override;
  bool adjacent(const Addr& a, const Addr& b) const override;
  bool has_upper_neighbour_beyond_children(const Addr& a) const override;
  std::optional<std::vector<Addr>> upset_neighbourhood(const Addr& s) const override;
  /// N(strict up-closure of v(l,X)) is X lifted below v(l,X).
  std::optional<std::vector<Addr>> strict_upset_neighbourhood(const Addr& t) const override;

  /// S_t: the phi-preimage of N(strict up-closure of t) strictly below t.
  std::vector<Addr> witness_set(const Addr& t) const;

 private:
  std::vector<Addr> lift_all(const std::vector<Addr>& xs, const Addr& above) const;
  std::shared_ptr<const SplitTree> t_;
};

struct SplitResult {
  std::shared_ptr<const SplitTree> tree;
  std::shared_ptr<const SplitGraph> graph;
};

/// Throws NotFiniteAdhesion when a successor's neighbourhood is not certified finite.
SplitResult split(std::shared_ptr<const TGraph> g);

/// Phi: high-rays of T' to high-rays of T, and back. Both are identities on descriptors.
inline HighRay Phi(const HighRay& r) { return r; }
inline HighRay Phi_inverse(const HighRay& r) { return r; }

struct TransportSample {
  std::string seq;
  HighRay target;
};

/// For each sample compares converges on T', converges_by_adhesion on G, and
/// the oracle on G' and on G. Decided verdicts must agree.
Report transport_check(const TGraph& g, const SplitGraph& gp, const std::vector<TransportSample>& samples,
                       std::size_t oracle_depth = 64);

/// DOT for a truncation of G' with v-nodes tagged.
std::string split_dot(const SplitGraph& gp, const FiniteTruncation& tr);

}  // namespace endspace
