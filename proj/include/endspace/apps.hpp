#pragma once

#include <optional>
#include <vector>

#include "endspace/endspace.hpp"
#include "endspace/report.hpp"
#include "endspace/samples.hpp"

namespace endspace {

/// Whether the end lies in Omega_t, i.e. t is on its high-ray. Throws LimitNode.
bool bip_member(const OrderTree& t, const EndDescriptor& e, const Addr& node);

/// Every pair of non-limit nodes: comparable means containment in the order's
/// direction, incomparable means disjoint, checked on the given ends plus the
/// leftmost end through each node.
Report nested_check(const OrderTree& t, const std::vector<Addr>& nodes, const std::vector<HighRay>& ends);

struct Distinction {
  Addr node;
  bool in_first = false;
  bool in_second = false;
};

/// Least node of one high-ray missing from the other, or its successor on the
/// ray when that node is a limit. Throws EqualEnds.
Distinction distinguish(const OrderTree& t, const EndDescriptor& e1, const EndDescriptor& e2);

/// Stages Omega_i indexed by ordinals up to the tree height. An end whose
/// high-ray has order type l+w with l zero or a limit first appears at l+n
/// (n >= 1) when it is the leftmost end through its node at height l+n+1, and
/// at l+w otherwise. Other ends first appear at their order type.
class DiscreteExpansion {
 public:
  /// The tree must outlive the expansion.
  explicit DiscreteExpansion(const OrderTree& t) : t_(&t) {}

  Ordinal length() const { return t_->tree_height().successor(); }
  Ordinal stage(const HighRay& r) const;
  bool in_stage(const HighRay& r, const Ordinal& i) const { return stage(r) <= i; }
  /// The root of the component an end was chosen for; Omega of it isolates
  /// the end within its stage. None for ends first met at a limit stage.
  std::optional<Addr> witness(const HighRay& r) const;

 private:
  const OrderTree* t_;
};

DiscreteExpansion expansion_build(const TGraph& g);

/// Cover, monotonicity, the choice rule, isolation within each difference
/// stage, and closure of stages under the convergent samples.
Report expansion_verify(const TGraph& g, const DiscreteExpansion& x, const std::vector<HighRay>& ends,
                        const std::vector<ConvergenceSample>& sequences);

}  // namespace endspace
