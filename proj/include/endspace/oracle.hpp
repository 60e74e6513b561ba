#pragma once

#include <vector>

#include "endspace/endspace.hpp"
#include "endspace/tgraph.hpp"

namespace endspace {

struct Component {
  std::vector<std::size_t> vertices;  // ascending indices into the truncation
  bool boundary = false;              // touches a boundary-flagged vertex
};

/// Components of the truncation minus X, ordered by least member.
std::vector<Component> components_minus(const FiniteTruncation& tr, const std::vector<std::size_t>& x);
/// Throws InvalidAddress if some member of X is not a vertex of tr.
std::vector<Component> components_minus(const FiniteTruncation& tr, const std::vector<Addr>& x);

/// Whether the last X-free vertices of two prefixes are separated by X in the
/// infinite graph: different components of tr - X, and one of them is either
/// boundary-free or sealed off by an up-closure whose certified neighbourhood
/// lies inside X. Throws PrefixNotInTruncation.
bool separated(const TGraph& g, const FiniteTruncation& tr, const std::vector<Addr>& p, const std::vector<Addr>& q,
               const std::vector<Addr>& x);

/// Definition-level verdict: realize the target and the first `depth` rays of
/// the sequence to `depth` vertices, then test separators along the target
/// (neighbourhoods of up-closures of its successors and strict up-closures of
/// its tops) and all sets of at most two core vertices. Unknown when the
/// truncation cannot certify either answer.
Verdict oracle_converges(const TGraph& g, const SequenceTemplate& seq, const HighRay& target, std::size_t depth);

}  // namespace endspace
