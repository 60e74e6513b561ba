#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "endspace/leveling.hpp"
#include "endspace/order_tree.hpp"

namespace endspace {

/// Successors of one limit grouped by N(up-closure of the successor). Classes
/// are canonically sorted address sets, indexed from 0.
struct SuccessorClasses {
  Card count;  // number of classes
  std::function<std::vector<Addr>(std::uint64_t)> at;
  std::function<std::optional<std::uint64_t>(const std::vector<Addr>&)> find;
  std::function<Card(std::uint64_t)> size;
  std::function<std::uint64_t(std::uint64_t, std::uint64_t)> member;  // child index of the r-th member
  /// Far out, the class of a child depends only on its index modulo this.
  std::uint64_t period = 1;
};

/// T-graph on an order tree, given by an adjacency oracle. Edges join
/// comparable nodes only, so each node is described by its down-neighbours.
class TGraph {
 public:
  virtual ~TGraph() = default;
  virtual const OrderTree& tree() const = 0;
  virtual std::string describe() const = 0;

  /// Root: none. Successor: its predecessor, then any extra lower edges.
  /// Limit: the first `count` members of its increasing down-neighbour chain.
  virtual std::vector<Addr> down_neighbours(const Addr& a, std::size_t count) const = 0;
  /// Least down-neighbour of `a` of height >= h (h < height(a)).
  virtual Addr least_down_neighbour_from(const Addr& a, const Ordinal& h) const = 0;
  /// Down-neighbours of `a` with height <= h, ascending.
  virtual std::vector<Addr> down_neighbours_upto(const Addr& a, const Ordinal& h) const = 0;
  virtual bool adjacent(const Addr& a, const Addr& b) const;
  /// True when some limit strictly above `a`, or some extra edge, may join
  /// `a` from above. Used for conservative boundary flags.
  virtual bool has_upper_neighbour_beyond_children(const Addr& a) const = 0;

  /// N(up-closure of s), exact, when the graph can certify it finite.
  virtual std::optional<std::vector<Addr>> upset_neighbourhood(const Addr& s) const = 0;
  /// N(strict up-closure of t), exact, when certified finite.
  virtual std::optional<std::vector<Addr>> strict_upset_neighbourhood(const Addr& t) const = 0;
  /// Certified grouping of the successors of a limit, when the graph has one.
  virtual std::optional<SuccessorClasses> successor_classes(const Addr&) const { return std::nullopt; }
};

using TGraphPtr = std::shared_ptr<const TGraph>;

/// Heights of the down-neighbour chain of a limit of height `lim` under the
/// recursion "next pick = level of least index strictly between the previous
/// pick and the limit".
Ordinal next_pick(const LevelOrder& levels, const std::optional<Ordinal>& prev, const Ordinal& lim);

/// Uniform T-graph built by the least-index recursion over a level partition.
class UniformGraph : public TGraph {
 public:
  UniformGraph(std::shared_ptr<const OrderTree> tree, LevelOrderPtr levels)
      : tree_(std::move(tree)), levels_(std::move(levels)) {}

  const OrderTree& tree() const override { return *tree_; }
  const std::shared_ptr<const OrderTree>& tree_ptr() const { return tree_; }
  const LevelOrder& levels() const { return *levels_; }
  const LevelOrderPtr& levels_ptr() const { return levels_; }
  std::string describe() const override { return "uniform[" + levels_->name() + "] " + tree_->describe(); }

  std::vector<Addr> down_neighbours(const Addr& a, std::size_t count) const override;
  Addr least_down_neighbour_from(const Addr& a, const Ordinal& h) const override;
  std::vector<Addr> down_neighbours_upto(const Addr& a, const Ordinal& h) const override;
  bool adjacent(const Addr& a, const Addr& b) const override;
  bool has_upper_neighbour_beyond_children(const Addr& a) const override;
  std::optional<std::vector<Addr>> upset_neighbourhood(const Addr& s) const override;
  std::optional<std::vector<Addr>> strict_upset_neighbourhood(const Addr& t) const override;

  /// S_t: nodes below the limit t whose level index is below t's.
  std::vector<Addr> witness_set(const Addr& t) const;

 private:
  /// Picks below height `cut` shared by every limit above a node of height
  /// `cut` whose least limit above has height `lim_min`.
  std::vector<Ordinal> low_picks(const Ordinal& cut, const Ordinal& lim_min) const;

  std::shared_ptr<const OrderTree> tree_;
  LevelOrderPtr levels_;
};

/// Extra lower edges and neighbourhood certificates for a catalog graph that
/// extends the least-index recursion.
struct ExplicitRules {
  std::string name;
  std::function<std::vector<Addr>(const Addr&)> extra_down;
  /// Whether some node above has an extra edge down to the argument.
  std::function<bool(const Addr&)> has_extra_up;
  std::function<std::optional<std::vector<Addr>>(const Addr&)> upset;
  std::function<std::optional<std::vector<Addr>>(const Addr&)> strict_upset;
  std::function<std::optional<SuccessorClasses>(const Addr&)> classes;
};

class ExplicitGraph : public TGraph {
 public:
  ExplicitGraph(std::shared_ptr<const OrderTree> tree, LevelOrderPtr levels, ExplicitRules rules)
      : base_(std::move(tree), std::move(levels)), rules_(std::move(rules)) {}

  const OrderTree& tree() const override { return base_.tree(); }
  std::string describe() const override { return "explicit[" + rules_.name + "] " + base_.tree().describe(); }
  std::vector<Addr> down_neighbours(const Addr& a, std::size_t count) const override;
  Addr least_down_neighbour_from(const Addr& a, const Ordinal& h) const override;
  std::vector<Addr> down_neighbours_upto(const Addr& a, const Ordinal& h) const override;
  bool adjacent(const Addr& a, const Addr& b) const override;
  bool has_upper_neighbour_beyond_children(const Addr& a) const override;
  std::optional<std::vector<Addr>> upset_neighbourhood(const Addr& s) const override { return rules_.upset(s); }
  std::optional<std::vector<Addr>> strict_upset_neighbourhood(const Addr& t) const override {
    return rules_.strict_upset(t);
  }
  std::optional<SuccessorClasses> successor_classes(const Addr& t) const override {
    return rules_.classes ? rules_.classes(t) : std::nullopt;
  }

 private:
  UniformGraph base_;
  ExplicitRules rules_;
};

struct AdhesionWitness {
  Addr limit;
  std::vector<Addr> set;
};

/// S_t for a limit t. Uniform graphs use the level-index rule; other graphs
/// must certify N(strict up-closure of t) finite or NotUniform is thrown.
AdhesionWitness adhesion_witness(const TGraph& g, const Addr& t);

/// Explicit finite subgraph.
struct FiniteTruncation {
  std::vector<Addr> vertices;
  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (lower, upper)
  std::vector<std::vector<std::size_t>> adj;
  std::vector<bool> boundary;
  std::string provenance;

  std::optional<std::size_t> find(const Addr& a) const;
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t size() const { return vertices.size(); }

  /// Register a vertex (idempotent); returns its index.
  std::size_t add_vertex(const Addr& a);
  void add_edge(std::size_t a, std::size_t b);

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// Enumerate the tree within `b`, close under predecessors and under the
/// least down-neighbour above each lower node (so intervals stay connected),
/// then add all induced edges and boundary flags.
FiniteTruncation truncate(const TGraph& g, const TruncBounds& b);

/// Close a node set under predecessors and under the least down-neighbour
/// of each limit above each lower member. Throws TooLarge past `cap`.
std::vector<Addr> interval_closure(const TGraph& g, std::vector<Addr> nodes, std::size_t cap);

/// Induced truncation on a given node set, with boundary flags.
FiniteTruncation induced(const TGraph& g, const std::vector<Addr>& nodes, const std::string& provenance);

std::string to_dot(const FiniteTruncation& tr, const std::function<std::string(std::size_t)>& attrs = {});

}  // namespace endspace
