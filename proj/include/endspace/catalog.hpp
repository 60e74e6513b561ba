#pragma once

#include <memory>
#include <string>
#include <vector>

#include "endspace/tgraph.hpp"
#include "endspace/treespec.hpp"

namespace endspace {

enum class AdhesionClass { Uniform, FiniteNotUniform };

struct CatalogEntry {
  std::string name;
  std::string dsl;
  std::shared_ptr<const SpecTree> tree;
  /// The entry's declared graph: uniform, or the explicit ladder table.
  TGraphPtr graph;
  AdhesionClass adhesion = AdhesionClass::Uniform;
};

const std::vector<std::string>& catalog_names();
/// Throws InvalidSpec for unknown names.
CatalogEntry catalog(const std::string& name);

/// "catalog:NAME" or DSL text; DSL trees get the canonical uniform graph.
CatalogEntry resolve_tree(const std::string& text);

std::shared_ptr<const UniformGraph> uniform_graph(const std::shared_ptr<const OrderTree>& tree,
                                                  LevelOrderPtr levels = canonical_levels());

}  // namespace endspace
