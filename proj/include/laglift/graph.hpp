#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "laglift/package.hpp"
#include "laglift/registry.hpp"

namespace laglift {

struct RootManifest {
  std::string module_name;
  std::vector<DependencyDecl> direct_dependencies;
};

RootManifest load_manifest(const std::filesystem::path& path);
RootManifest parse_manifest(std::string_view json_text, const std::string& source = "<manifest>");
nlohmann::json manifest_to_json(const RootManifest& manifest);

/// One line of a dependency-tree dump. `parent` indexes into
/// ResolvedTree::nodes, or is -1 for children of the root.
struct TreeNode {
  PackageId package;
  Version version;
  Scope scope = Scope::Compile;
  int depth = 1;
  std::ptrdiff_t parent = -1;
};

struct ResolvedTree {
  std::string root;  // "group:artifact" of the root line
  std::vector<TreeNode> nodes;
};

/// Parses the indented tree layout printed by `mvn dependency:tree`:
///
///   com.acme:app:jar:1.0
///   +- g:a:jar:1.0:compile
///   |  \- g:c:jar:1.0:compile
///   \- g:b:jar:1.0:test
///
/// Lines may carry a leading "[INFO] ". Throws Error{Parse} on empty input or
/// a coordinate with the wrong field count, Error{Indentation} when a line is
/// nested more than one level below its predecessor.
ResolvedTree parse_dep_tree(std::string_view text);

struct GraphNode {
  Version version;
  std::size_t depth = 0;  // breadth-first distance from the root
};

using EdgeKey = std::pair<NodeRef, PackageId>;

/// Resolved project graph: one node per package, with every declared edge
/// among graph nodes, including those a tree dump hides.
struct DependencyGraph {
  std::string root;
  std::map<PackageId, GraphNode> nodes;
  /// (from, to) -> version the source declares for the target.
  std::map<EdgeKey, Version> edges;

  /// Inputs for re-resolution: the root's declarations and the versions fixed
  /// by earlier upgrades.
  std::vector<DependencyDecl> root_declarations;
  std::map<PackageId, Version> pins;

  /// Declarations whose target is not a graph node.
  std::vector<std::string> diagnostics;

  bool contains(const PackageId& p) const { return nodes.count(p) != 0; }
  const Version& version_of(const PackageId& p) const;
  std::vector<PackageId> direct_dependencies() const;
};

/// Restores the full edge set of a tree dump against the registry. Test and
/// provided subtrees are dropped entirely.
DependencyGraph restore_edges(const ResolvedTree& tree, const RegistryIndex& reg);

/// Breadth-first resolution with nearest-wins mediation; among declarations
/// at equal depth the first one visited wins.
DependencyGraph resolve_graph(const RootManifest& manifest, const RegistryIndex& reg);

/// Re-resolves `g` with `p` fixed at `new_version` on top of the earlier pins.
DependencyGraph update_graph(const DependencyGraph& g, const PackageId& p, const Version& new_version,
                             const RegistryIndex& reg);

/// Applies several upgrades with a single re-resolution.
DependencyGraph update_graph(const DependencyGraph& g, const std::map<PackageId, Version>& upgrades,
                             const RegistryIndex& reg);

/// Renders the mediated tree in the format accepted by parse_dep_tree. Each
/// node appears once, under the parent whose declaration won mediation.
std::string render_dep_tree(const DependencyGraph& g, const RegistryIndex& reg);

struct GraphMetrics {
  std::size_t node_count = 0;
  std::uint64_t total_version_lag = 0;
  std::int64_t total_time_lag_days = 0;

  friend bool operator==(const GraphMetrics&, const GraphMetrics&) = default;
};

GraphMetrics graph_metrics(const DependencyGraph& g, const RegistryIndex& reg);

}  // namespace laglift
