#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endspace/order_tree.hpp"

namespace endspace {

/// Antichain partition of a tree by levels: the nodes of height h form the
/// antichain U_n with n = index(h).
class LevelOrder {
 public:
  virtual ~LevelOrder() = default;
  virtual std::string name() const = 0;
  virtual Natural index(const Ordinal& h) const = 0;
  /// The height of least index in the open interval (lo, lim); no lower
  /// bound when lo is empty. Requires the interval to be nonempty.
  virtual Ordinal min_in(const std::optional<Ordinal>& lo, const Ordinal& lim) const = 0;
};

using LevelOrderPtr = std::shared_ptr<const LevelOrder>;

/// index = enum_index(height).
class CanonicalLevels final : public LevelOrder {
 public:
  std::string name() const override { return "canonical"; }
  Natural index(const Ordinal& h) const override { return enum_index(h); }
  Ordinal min_in(const std::optional<Ordinal>& lo, const Ordinal& lim) const override;
};

/// Canonical enumeration with consecutive pairs (2k, 2k+1) swapped.
class PairSwappedLevels final : public LevelOrder {
 public:
  std::string name() const override { return "pair-swapped"; }
  Natural index(const Ordinal& h) const override;
  Ordinal min_in(const std::optional<Ordinal>& lo, const Ordinal& lim) const override;
};

LevelOrderPtr canonical_levels();
LevelOrderPtr pair_swapped_levels();

Natural level_index(const OrderTree& tree, const LevelOrder& levels, const Addr& a);

struct PartitionReport {
  std::size_t nodes = 0;
  std::size_t classes = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Same-index nodes pairwise incomparable; index constant on levels and
/// injective across them.
PartitionReport verify_partition(const OrderTree& tree, const LevelOrder& levels, const std::vector<Addr>& nodes);

}  // namespace endspace
