#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace laglift {

enum class ConstructKind { Class, Method, Field };

ConstructKind parse_construct_kind(std::string_view text);
std::string_view to_string(ConstructKind kind);

/// A class, method or field, identified by kind and signature
/// (e.g. method "com.x.Foo#bar(int)").
struct ConstructId {
  ConstructKind kind = ConstructKind::Class;
  std::string signature;

  /// Parses "kind:signature", splitting at the first ':'.
  static ConstructId parse(std::string_view text);
  std::string str() const;

  friend auto operator<=>(const ConstructId&, const ConstructId&) = default;
};

/// Exported constructs of one release, each with an opaque 8-hex-digit
/// fingerprint of its shape. Any fingerprint change is a contract change.
struct ApiSurface {
  std::map<ConstructId, std::string> entries;

  friend bool operator==(const ApiSurface&, const ApiSurface&) = default;
};

bool is_fingerprint(std::string_view text);

struct BreakingSet {
  std::set<ConstructId> removed;
  std::set<ConstructId> changed;

  bool empty() const { return removed.empty() && changed.empty(); }
  std::set<ConstructId> all() const;
};

/// Constructs of `old_api` that `new_api` removed or whose fingerprint it
/// changed. Additions are never breaking.
BreakingSet breaking_changes(const ApiSurface& old_api, const ApiSurface& new_api);

}  // namespace laglift
