#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <vector>

#include "endspace/report.hpp"
#include "endspace/tgraph.hpp"

namespace endspace {

/// Strict tree order restricted to a truncation, derived from its edges.
/// Valid because truncations are interval-closed.
struct TruncOrder {
  std::vector<boost::dynamic_bitset<>> below;  // below[v] = members strictly under v
  std::vector<Ordinal> height;
  std::vector<std::size_t> by_height;  // vertex indices, ascending height

  static TruncOrder build(const TGraph& g, const FiniteTruncation& tr);
  bool lt(std::size_t a, std::size_t b) const { return below[b].test(a); }
  bool comparable(std::size_t a, std::size_t b) const { return a == b || lt(a, b) || lt(b, a); }
};

/// Smallest breadth-2 truncation (by doubling depth) with at least `min_nodes` vertices.
FiniteTruncation truncation_of_size(const TGraph& g, std::size_t min_nodes);

/// Up to `want` distinct limit nodes: those in a shallow enumeration, then tops of random rays.
std::vector<Addr> sample_limits(const OrderTree& t, std::size_t want, std::uint64_t seed);

/// Separator, unique-minimum and interval-connectivity lemmas on a truncation.
/// Separators and intervals are checked exhaustively; connected subsets are sampled.
Report check_tree_lemmas(const TGraph& g, const FiniteTruncation& tr, std::uint64_t seed);

struct AdhesionReport {
  Report report;
  bool finite_adhesion = true;  // N(up-closure of s) certified and sound for sampled non-limits
  bool uniform = true;          // N(strict up-closure of t) certified and sound for sampled limits
};

/// Certificates from the graph compared against a neighbourhood scan of the truncation.
AdhesionReport check_adhesion_equivalences(const TGraph& g, const FiniteTruncation& tr);

/// Pick uniqueness and minimality, cofinality against 20 lower nodes, and
/// witness soundness for nodes above each limit.
Report check_dlt(const UniformGraph& g, const std::vector<Addr>& limits, std::uint64_t seed);

}  // namespace endspace
