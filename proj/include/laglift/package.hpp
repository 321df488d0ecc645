#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "laglift/version.hpp"

namespace laglift {

/// Maven coordinate without version: "group:artifact".
struct PackageId {
  std::string group;
  std::string artifact;

  /// Parses "group:artifact"; both parts must be non-empty and colon-free.
  static PackageId parse(std::string_view text);

  std::string str() const { return group + ":" + artifact; }

  friend auto operator<=>(const PackageId&, const PackageId&) = default;
};

enum class Scope { Compile, Runtime, Test, Provided };

Scope parse_scope(std::string_view text);
std::string_view to_string(Scope scope);

/// Test and provided dependencies never enter the upgrade graph.
inline bool is_graph_scope(Scope scope) { return scope == Scope::Compile || scope == Scope::Runtime; }

struct DependencyDecl {
  PackageId package;
  Version version;
  Scope scope = Scope::Compile;
};

/// Either a package or the project root (nullopt).
using NodeRef = std::optional<PackageId>;

std::string to_string(const NodeRef& node);

}  // namespace laglift
