#include "laglift/registry.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "laglift/error.hpp"

namespace laglift {

namespace detail {

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + ": malformed JSON: " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

RegistryIndex RegistryIndex::build(std::vector<Release> releases) {
  RegistryIndex reg;
  for (auto& r : releases) reg.packages_[r.package].push_back(std::move(r));

  for (auto& [id, group] : reg.packages_) {
    std::stable_sort(group.begin(), group.end(),
                     [](const Release& a, const Release& b) { return a.version < b.version; });
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (group[i - 1].version == group[i].version) {
        std::string msg = "duplicate release " + group[i].coordinate();
        if (group[i - 1].version.raw() != group[i].version.raw()) msg += " (equal to " + group[i - 1].coordinate() + ")";
        throw Error(ErrorKind::DuplicateRelease, msg);
      }
    }
  }

  for (const auto& [id, group] : reg.packages_) {
    for (const auto& r : group) {
      std::set<PackageId> seen;
      for (const auto& d : r.dependencies) {
        if (d.package == r.package) {
          throw Error(ErrorKind::InvalidInput, r.coordinate() + " depends on itself");
        }
        if (!seen.insert(d.package).second) {
          throw Error(ErrorKind::InvalidInput, r.coordinate() + " declares " + d.package.str() + " more than once");
        }
        if (!reg.find(d.package, d.version)) {
          throw Error(ErrorKind::DanglingTarget,
                      r.coordinate() + " depends on missing release " + d.package.str() + ":" + d.version.raw());
        }
      }
    }
  }
  return reg;
}

std::span<const Release> RegistryIndex::releases_of(const PackageId& p) const {
  auto it = packages_.find(p);
  if (it == packages_.end()) throw Error(ErrorKind::UnknownPackage, "unknown package " + p.str());
  return it->second;
}

std::vector<Version> RegistryIndex::versions_of(const PackageId& p) const {
  std::vector<Version> out;
  for (const auto& r : releases_of(p)) out.push_back(r.version);
  return out;
}

const Release* RegistryIndex::find(const PackageId& p, const Version& v) const {
  auto it = packages_.find(p);
  if (it == packages_.end()) return nullptr;
  auto pos = std::lower_bound(it->second.begin(), it->second.end(), v,
                              [](const Release& r, const Version& x) { return r.version < x; });
  if (pos == it->second.end() || pos->version != v) return nullptr;
  return &*pos;
}

const Release& RegistryIndex::release(const PackageId& p, const Version& v) const {
  if (const auto* r = find(p, v)) return *r;
  throw Error(ErrorKind::UnknownRelease, "unknown release " + p.str() + ":" + v.raw());
}

Version RegistryIndex::latest_stable(const PackageId& p) const {
  const auto group = releases_of(p);
  for (auto it = group.rbegin(); it != group.rend(); ++it) {
    if (it->version.is_stable()) return it->version;
  }
  throw Error(ErrorKind::NoStableRelease, "package " + p.str() + " has no stable release");
}

std::size_t RegistryIndex::closure_size(const PackageId& p, const Version& v) const {
  // Breadth-first, nearest wins; a package keeps the first version reached.
  std::map<PackageId, Version> resolved;
  std::deque<const Release*> queue;
  resolved.emplace(p, v);
  queue.push_back(&release(p, v));
  while (!queue.empty()) {
    const Release* r = queue.front();
    queue.pop_front();
    for (const auto& d : r->dependencies) {
      if (!is_graph_scope(d.scope) || resolved.count(d.package)) continue;
      resolved.emplace(d.package, d.version);
      queue.push_back(&release(d.package, d.version));
    }
  }
  return resolved.size() - 1;
}

LagMeasure RegistryIndex::lag(const PackageId& p, const Version& v) const {
  const Release& current = release(p, v);
  LagMeasure out;
  out.version_lag = version_lag(v, versions_of(p));
  if (out.version_lag > 0) {
    out.time_lag_days = time_lag(current.released_at, release(p, latest_stable(p)).released_at);
  }
  return out;
}

RegistryIndex registry_from_json(const nlohmann::json& doc, const std::string& source) {
  using detail::JsonCursor;
  const JsonCursor root(doc, source, "");
  root.expect_object({"packages"});
  const JsonCursor packages = root.at("packages");

  std::vector<Release> releases;
  for (std::size_t i = 0; i < packages.array_size(); ++i) {
    const JsonCursor pkg = packages.at(i);
    pkg.expect_object({"group", "artifact", "releases"});
    const std::string group = pkg.at("group").string();
    const std::string artifact = pkg.at("artifact").string();
    const PackageId id = pkg.guarded([&] { return PackageId::parse(group + ":" + artifact); });

    const JsonCursor rels = pkg.at("releases");
    for (std::size_t j = 0; j < rels.array_size(); ++j) {
      const JsonCursor rel = rels.at(j);
      rel.expect_object({"version", "released_at", "dependencies", "api"});
      Release r{id, rel.at("version").guarded([&] { return Version::parse(rel.at("version").string()); }),
                rel.at("released_at").guarded([&] { return parse_timestamp(rel.at("released_at").string()); }),
                {},
                {}};

      const JsonCursor deps = rel.at("dependencies");
      for (std::size_t k = 0; k < deps.array_size(); ++k) {
        const JsonCursor dep = deps.at(k);
        dep.expect_object({"package", "version", "scope"});
        r.dependencies.push_back(dep.guarded([&] {
          return DependencyDecl{PackageId::parse(dep.at("package").string()), Version::parse(dep.at("version").string()),
                                parse_scope(dep.at("scope").string())};
        }));
      }

      const JsonCursor api = rel.at("api");
      for (std::size_t k = 0; k < api.array_size(); ++k) {
        const JsonCursor entry = api.at(k);
        entry.expect_object({"id", "kind", "fingerprint"});
        ConstructId cid{entry.guarded([&] { return parse_construct_kind(entry.at("kind").string()); }),
                        entry.at("id").string()};
        if (cid.signature.empty()) entry.fail("empty construct id");
        const std::string fp = entry.at("fingerprint").string();
        if (!is_fingerprint(fp)) entry.fail("fingerprint '" + fp + "' is not 8 lower-case hex digits");
        if (!r.api.entries.emplace(cid, fp).second) entry.fail("duplicate construct " + cid.str());
      }
      releases.push_back(std::move(r));
    }
  }
  try {
    return RegistryIndex::build(std::move(releases));
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
}

RegistryIndex parse_registry(std::string_view json_text, const std::string& source) {
  return registry_from_json(detail::parse_json_text(json_text, source), source);
}

RegistryIndex load_registry(const std::filesystem::path& path) {
  return parse_registry(detail::read_file(path), path.string());
}

nlohmann::json registry_to_json(const RegistryIndex& reg) {
  nlohmann::json packages = nlohmann::json::array();
  for (const auto& [id, group] : reg.packages()) {
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : group) {
      nlohmann::json deps = nlohmann::json::array();
      for (const auto& d : r.dependencies) {
        deps.push_back({{"package", d.package.str()}, {"version", d.version.raw()}, {"scope", to_string(d.scope)}});
      }
      nlohmann::json api = nlohmann::json::array();
      for (const auto& [cid, fp] : r.api.entries) {
        api.push_back({{"id", cid.signature}, {"kind", to_string(cid.kind)}, {"fingerprint", fp}});
      }
      rels.push_back({{"version", r.version.raw()},
                      {"released_at", format_timestamp(r.released_at)},
                      {"dependencies", std::move(deps)},
                      {"api", std::move(api)}});
    }
    packages.push_back({{"group", id.group}, {"artifact", id.artifact}, {"releases", std::move(rels)}});
  }
  return {{"packages", std::move(packages)}};
}

}  // namespace laglift
