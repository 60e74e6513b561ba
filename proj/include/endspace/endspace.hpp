#pragma once

#include <string>
#include <vector>

#include "endspace/dsl.hpp"
#include "endspace/report.hpp"
#include "endspace/tgraph.hpp"

namespace endspace {

/// An end, identified with its high-ray.
struct EndDescriptor {
  HighRay ray;
  bool operator==(const EndDescriptor&) const = default;
};

enum class VerdictKind { Converges, Diverges, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string reason;
  Json witness = Json::object();
  std::uint64_t depth = 0;

  static Verdict converges(std::string reason) { return {VerdictKind::Converges, std::move(reason), Json::object(), 0}; }
  static Verdict diverges(std::string reason, Json w) { return {VerdictKind::Diverges, std::move(reason), std::move(w), 0}; }
  static Verdict unknown(std::string reason, std::uint64_t depth) {
    return {VerdictKind::Unknown, std::move(reason), Json::object(), depth};
  }
  bool decided() const { return kind != VerdictKind::Unknown; }
  std::string name() const;
  Json to_json() const;
};

/// Two verdicts contradict when both are decided and differ.
bool contradicts(const Verdict& a, const Verdict& b);

/// First k vertices of a ray of g inside the chain of r: root, then paths
/// through the intervals between successive cofinal points of r. Prefix-stable in k.
std::vector<Addr> realize_ray(const TGraph& g, const HighRay& r, std::size_t k);

/// Which side of the criterion split index n falls on, with its data.
struct SplitPoint {
  bool a_side = false;  // target strictly inside the n-th ray
  Addr top;             // a-side: the top of the target the n-th ray passes
  Ordinal meet;         // b-side: order type of the common part
};
SplitPoint split_point(const OrderTree& t, const HighRay& target, const HighRay& ray_n);

/// Exact verdict from the tree-side criteria: on the side where the target is
/// a proper initial part, every top is met finitely often; elsewhere the
/// common part eventually leaves every successor's strict downset. Decided for
/// affine templates by sampling each residue class far out, Unknown otherwise.
/// Throws TemplateOutsideTree when an instance is not a high-ray of the tree.
Verdict converges(const OrderTree& t, const SequenceTemplate& seq, const HighRay& target);
inline Verdict converges(const TGraph& g, const SequenceTemplate& seq, const EndDescriptor& target) {
  return converges(g.tree(), seq, target.ray);
}

/// The same criteria for a finite-adhesion graph: on the A-side, rays are
/// grouped by N(up-closure of the successor above the target) instead of by top.
Verdict converges_by_adhesion(const TGraph& g, const SequenceTemplate& seq, const HighRay& target);

/// The end bijection between two uniform graphs on one tree: identity on descriptors.
struct HomeoMap {
  std::string tree;
  EndDescriptor operator()(const EndDescriptor& e) const { return e; }
  SequenceTemplate operator()(const SequenceTemplate& s) const { return s; }
};
/// Throws SpecMismatch unless both graphs live on the same tree.
HomeoMap homeo_map(const TGraph& g1, const TGraph& g2);

}  // namespace endspace
