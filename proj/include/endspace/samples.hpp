#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "endspace/order_tree.hpp"

namespace endspace {

/// A convergence question: does the template's sequence of ends converge to the target?
struct ConvergenceSample {
  std::string seq;     // SequenceTemplate text in the variable n
  HighRay target;
  std::string family;  // which generator produced it
};

/// Affine templates around random targets of the tree: constant rays,
/// deepening agreement, fixed branching, ordinal positions, and rays through
/// tops of the target. Deterministic in the seed; every instance is valid.
std::vector<ConvergenceSample> convergence_samples(const OrderTree& t, std::size_t count, std::uint64_t seed);

}  // namespace endspace
