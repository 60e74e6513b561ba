#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "endspace/address.hpp"
#include "endspace/ordinal.hpp"

namespace endspace {

/// Cardinality of a countable family; nullopt means w (infinitely many).
using Card = std::optional<std::uint64_t>;

using Rng = std::mt19937_64;

/// Finite-or-w list of nodes, produced lazily.
struct TopSet {
  Card count = 0;
  std::function<Addr(std::uint64_t)> at;

  bool empty() const { return count && *count == 0; }
  std::vector<Addr> first(std::uint64_t k) const;

  static TopSet none() { return {}; }
  static TopSet single(Addr a);
  /// Concatenation; infinite parts are interleaved so every member gets a
  /// finite index.
  static TopSet join(TopSet a, TopSet b);
  TopSet prefixed(const Addr& pre) const;
};

enum class NodeKind { Root, Successor, Limit };

enum class RayRelation { Equal, FirstInSecond, SecondInFirst, Incomparable };

struct RayComparison {
  RayRelation relation;
  Ordinal meet;  // order type of the intersection chain
};

/// Enumeration limits for finite truncations. `depth` bounds every CNF
/// coefficient and exponent of a node's height; `breadth` bounds child,
/// copy and top indices.
struct TruncBounds {
  std::uint64_t depth = 8;
  std::uint64_t breadth = 2;
  std::size_t max_nodes = 4096;
};

/// True iff every coefficient and exponent of `h` is at most `depth`.
bool within_depth(const Ordinal& h, std::uint64_t depth);

/// Countable order tree with decidable order on finite addresses and
/// canonical high-ray descriptors.
class OrderTree {
 public:
  virtual ~OrderTree() = default;

  virtual std::string describe() const = 0;
  virtual Addr root() const = 0;
  /// Throws InvalidAddress when `a` does not decode to a node.
  virtual void check_addr(const Addr& a) const = 0;
  virtual Ordinal height(const Addr& a) const = 0;
  virtual bool le(const Addr& a, const Addr& b) const = 0;
  /// The node below-or-equal `a` at height `h` (h <= height(a)).
  virtual Addr ancestor(const Addr& a, const Ordinal& h) const = 0;
  /// Successors of `a` with child index in [lo, hi).
  virtual std::vector<Addr> children(const Addr& a, std::uint64_t lo, std::uint64_t hi) const = 0;
  virtual Card child_count(const Addr& a) const = 0;
  /// Least height of a limit node strictly above `a`, if any.
  virtual std::optional<Ordinal> min_limit_above(const Addr& a) const = 0;
  /// Order type of the tree: sup of height + 1.
  virtual Ordinal tree_height() const = 0;
  /// Nodes within the bounds, structurally enumerated.
  virtual std::vector<Addr> enumerate(const TruncBounds& b) const = 0;

  /// Throws InvalidHighRay when `r` is not a high-ray of this tree.
  virtual void check_ray(const HighRay& r) const = 0;
  virtual Ordinal order_type(const HighRay& r) const = 0;
  /// The node of `r` at height h < order_type(r).
  virtual Addr node_at(const HighRay& r, const Ordinal& h) const = 0;
  virtual bool contains(const HighRay& r, const Addr& a) const = 0;
  /// Order type of the chain r1 ∩ r2.
  virtual Ordinal meet(const HighRay& r1, const HighRay& r2) const = 0;
  /// Limit nodes whose strict downset is `r`.
  virtual TopSet tops(const HighRay& r) const = 0;
  /// Canonical descriptor of the strict downset of a limit node.
  virtual HighRay downset(const Addr& limit) const = 0;
  /// Leftmost high-ray containing `a` of order type height(a)+w, if one exists.
  virtual std::optional<HighRay> least_ray_through(const Addr& a) const = 0;
  virtual bool has_rays() const = 0;
  /// A random high-ray; `budget` loosely bounds descriptor size.
  virtual HighRay random_ray(Rng& rng, unsigned budget) const = 0;

  NodeKind kind(const Addr& a) const;
  /// Immediate predecessor of a successor node.
  Addr pred(const Addr& a) const;
  bool lt(const Addr& a, const Addr& b) const { return !(a == b) && le(a, b); }
  bool comparable(const Addr& a, const Addr& b) const { return le(a, b) || le(b, a); }
  RayComparison compare(const HighRay& r1, const HighRay& r2) const;
  /// The node of `r` at height h, or nullopt when r is too short.
  std::optional<Addr> node_at_if(const HighRay& r, const Ordinal& h) const;
};

}  // namespace endspace
