#pragma once

// Compact builders for hand-written registries, manifests and usage models.

#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "laglift/compat.hpp"
#include "laglift/graph.hpp"
#include "laglift/registry.hpp"

namespace laglift::testing {

inline PackageId pid(const std::string& text) { return PackageId::parse(text); }
inline Version ver(const std::string& text) { return Version::parse(text); }
inline ConstructId cid(const std::string& text) { return ConstructId::parse(text); }

inline DependencyDecl dep(const std::string& package, const std::string& version, Scope scope = Scope::Compile) {
  return DependencyDecl{pid(package), ver(version), scope};
}

inline ApiSurface api(std::initializer_list<std::pair<const char*, const char*>> entries) {
  ApiSurface out;
  for (const auto& [id, fp] : entries) out.entries.emplace(cid(id), fp);
  return out;
}

/// Releases get timestamps ten days apart per package, starting 2020-01-01,
/// unless one is given.
class RegistryBuilder {
 public:
  RegistryBuilder& add(const std::string& package, const std::string& version, std::vector<DependencyDecl> deps = {},
                       ApiSurface surface = {}, const std::string& released_at = {}) {
    const int n = counter_[package]++;
    Timestamp at = released_at.empty() ? parse_timestamp("2020-01-01T00:00:00Z") + std::chrono::days{10 * n}
                                       : parse_timestamp(released_at);
    releases_.push_back(Release{pid(package), ver(version), at, std::move(deps), std::move(surface)});
    return *this;
  }

  RegistryIndex build() const { return RegistryIndex::build(releases_); }

 private:
  std::vector<Release> releases_;
  std::map<std::string, int> counter_;
};

inline RootManifest manifest(std::vector<DependencyDecl> deps, const std::string& name = "app") {
  return RootManifest{name, std::move(deps)};
}

/// Usage model whose entry `method:app.Main#main()` references each construct
/// in `used`; `owners` maps every library construct to its package.
inline UsageModel usage(std::initializer_list<std::pair<const char*, const char*>> used_with_owner) {
  UsageModel u;
  const ConstructId main = cid("method:app.Main#main()");
  u.entries.insert(main);
  u.owner.emplace(main, std::nullopt);
  for (const auto& [c, owner] : used_with_owner) {
    u.owner.emplace(cid(c), pid(owner));
    u.edges.emplace(main, cid(c));
  }
  return u;
}

}  // namespace laglift::testing
