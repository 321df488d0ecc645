#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "laglift/api.hpp"
#include "laglift/package.hpp"
#include "laglift/version.hpp"

namespace laglift {

struct Release {
  PackageId package;
  Version version;
  Timestamp released_at;
  std::vector<DependencyDecl> dependencies;
  ApiSurface api;

  std::string coordinate() const { return package.str() + ":" + version.raw(); }
};

/// Immutable offline snapshot of every package and release.
///
/// The index is closed-world: every declared dependency names a release that
/// exists in the index. Releases of a package are stored in ascending version
/// order, and no two of them compare equal.
class RegistryIndex {
 public:
  RegistryIndex() = default;

  /// Validates and indexes `releases`. Throws Error{DuplicateRelease},
  /// Error{DanglingTarget} or Error{InvalidInput} (self-dependency, repeated
  /// dependency on one package within a release).
  static RegistryIndex build(std::vector<Release> releases);

  const std::map<PackageId, std::vector<Release>>& packages() const noexcept { return packages_; }
  std::size_t package_count() const noexcept { return packages_.size(); }
  bool contains(const PackageId& p) const { return packages_.count(p) != 0; }

  /// Ascending release list. Throws Error{UnknownPackage}.
  std::span<const Release> releases_of(const PackageId& p) const;
  std::vector<Version> versions_of(const PackageId& p) const;

  const Release* find(const PackageId& p, const Version& v) const;
  /// Throws Error{UnknownRelease}.
  const Release& release(const PackageId& p, const Version& v) const;

  /// Highest stable version. Throws Error{NoStableRelease}.
  Version latest_stable(const PackageId& p) const;

  /// Distinct packages in the mediated transitive closure of (p, v) resolved
  /// on its own, excluding p and anything reached via test/provided.
  std::size_t closure_size(const PackageId& p, const Version& v) const;

  /// Version lag and time lag of (p, v) against the latest stable release.
  LagMeasure lag(const PackageId& p, const Version& v) const;

 private:
  std::map<PackageId, std::vector<Release>> packages_;
};

/// Reads and validates a registry document. Errors carry the file name and
/// the JSON location of the offending element.
RegistryIndex load_registry(const std::filesystem::path& path);
RegistryIndex parse_registry(std::string_view json_text, const std::string& source = "<registry>");
RegistryIndex registry_from_json(const nlohmann::json& doc, const std::string& source = "<registry>");
nlohmann::json registry_to_json(const RegistryIndex& reg);

inline std::span<const Release> releases_of(const RegistryIndex& reg, const PackageId& p) {
  return reg.releases_of(p);
}
inline Version latest_stable(const RegistryIndex& reg, const PackageId& p) { return reg.latest_stable(p); }
inline std::size_t closure_size(const RegistryIndex& reg, const PackageId& p, const Version& v) {
  return reg.closure_size(p, v);
}

}  // namespace laglift
