#include "laglift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "laglift/error.hpp"

namespace laglift {

namespace {

// Draws only from the engine's raw output, whose sequence is fixed by the
// standard, so fixtures are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  std::string hex8() {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(engine_() & 0xffffffffu));
    return buf;
  }

 private:
  std::mt19937_64 engine_;
};

struct GenPackage {
  PackageId id;
  std::vector<Release> releases;
};

std::string two_digits(int i) {
  return (i < 10 ? "0" : "") + std::to_string(i);
}

Scope pick_scope(Rng& rng) {
  const auto roll = rng.below(20);
  if (roll < 13) return Scope::Compile;
  if (roll < 17) return Scope::Runtime;
  if (roll < 19) return Scope::Test;
  return Scope::Provided;
}

std::vector<std::string> version_labels(Rng& rng, int count) {
  std::vector<std::string> out;
  int major = 1, minor = 0;
  std::string next = "1.0";
  while (static_cast<int>(out.size()) < count) {
    if (!out.empty() && static_cast<int>(out.size()) + 1 < count && rng.chance(0.15)) {
      out.push_back(next + "-rc1");
    }
    out.push_back(next);
    if (rng.chance(0.3)) {
      ++major;
      minor = 0;
    } else {
      ++minor;
    }
    next = std::to_string(major) + "." + std::to_string(minor);
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

ApiSurface evolve_api(Rng& rng, const ApiSurface& prev, const std::string& prefix, int& next_method,
                      double breaking_probability) {
  ApiSurface out;
  for (const auto& [id, fp] : prev.entries) {
    if (rng.chance(breaking_probability)) {
      if (rng.chance(0.5)) continue;  // removed
      out.entries.emplace(id, rng.hex8());
    } else {
      out.entries.emplace(id, fp);
    }
  }
  if (rng.chance(0.3)) {
    out.entries.emplace(ConstructId{ConstructKind::Method, prefix + "#m" + std::to_string(next_method++) + "()"},
                        rng.hex8());
  }
  return out;
}

}  // namespace

void validate_params(const EcosystemParams& p) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, "ecosystem parameter " + what); };
  if (p.package_count < 1) bad("package_count must be >= 1");
  if (p.package_count > 99) bad("package_count must be <= 99");
  if (p.max_versions < 1) bad("max_versions must be >= 1");
  if (p.max_deps_per_release < 0) bad("max_deps_per_release must be >= 0");
  if (!(p.breaking_probability >= 0.0 && p.breaking_probability <= 1.0)) bad("breaking_probability must be in [0,1]");
  if (!(p.usage_density >= 0.0 && p.usage_density <= 1.0)) bad("usage_density must be in [0,1]");
}

Ecosystem gen_ecosystem(const EcosystemParams& params) {
  validate_params(params);
  Rng rng(params.seed);
  const int n = params.package_count;
  const Timestamp epoch = parse_timestamp("2020-01-01T00:00:00Z");
  using std::chrono::days;
  using std::chrono::hours;

  std::vector<GenPackage> packages(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) packages[static_cast<std::size_t>(i)].id = PackageId{"org.gen", "lib" + two_digits(i)};

  // Later packages first, so every declaration can target an existing release.
  for (int i = n - 1; i >= 0; --i) {
    auto& pkg = packages[static_cast<std::size_t>(i)];
    const std::string prefix = "org.gen.lib" + two_digits(i) + ".Api";
    const auto labels = version_labels(rng, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.max_versions))));

    Timestamp at = epoch + days{rng.below(120)};
    int next_method = 2;
    ApiSurface api;
    api.entries.emplace(ConstructId{ConstructKind::Class, prefix}, rng.hex8());
    api.entries.emplace(ConstructId{ConstructKind::Method, prefix + "#m0()"}, rng.hex8());
    api.entries.emplace(ConstructId{ConstructKind::Method, prefix + "#m1()"}, rng.hex8());
    api.entries.emplace(ConstructId{ConstructKind::Field, prefix + "#VALUE"}, rng.hex8());

    std::vector<DependencyDecl> deps;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (r > 0) {
        const auto gap_days = 1 + rng.below(90);
        const auto gap_hours = rng.below(24);
        at += days{gap_days} + hours{gap_hours};
        api = evolve_api(rng, api, prefix, next_method, params.breaking_probability);
      }

      // Declarations drift: targets move to other releases, occasionally
      // disappear, and new ones are added.
      std::vector<DependencyDecl> next;
      for (const auto& d : deps) {
        if (rng.chance(0.1)) continue;
        DependencyDecl moved = d;
        if (rng.chance(0.5)) {
          const auto& target = packages[static_cast<std::size_t>(std::stoi(d.package.artifact.substr(3)))].releases;
          moved.version = target[rng.below(target.size())].version;
        }
        next.push_back(std::move(moved));
      }
      const bool first = r == 0;
      const int room = params.max_deps_per_release - static_cast<int>(next.size());
      int additions = 0;
      if (room > 0 && i + 1 < n) additions = first ? static_cast<int>(rng.below(static_cast<std::uint64_t>(room) + 1))
                                                   : (rng.chance(0.25) ? 1 : 0);
      for (int a = 0; a < additions; ++a) {
        const int j = i + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i - 1)));
        const auto& target = packages[static_cast<std::size_t>(j)];
        if (std::any_of(next.begin(), next.end(), [&](const DependencyDecl& d) { return d.package == target.id; })) {
          continue;
        }
        next.push_back(DependencyDecl{target.id, target.releases[rng.below(target.releases.size())].version,
                                      pick_scope(rng)});
      }
      deps = next;
      pkg.releases.push_back(Release{pkg.id, Version::parse(labels[r]), at, deps, api});
    }
  }

  std::vector<Release> all;
  for (auto& pkg : packages) {
    for (auto& r : pkg.releases) all.push_back(r);
  }
  Ecosystem eco;
  eco.registry = RegistryIndex::build(std::move(all));

  // Root: a few packages, pinned to older releases more often than not.
  eco.manifest.module_name = "org.gen:app";
  const int direct = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(3, n))));
  for (int k = 0; k < direct; ++k) {
    const auto& pkg = packages[rng.below(static_cast<std::uint64_t>(n))];
    if (std::any_of(eco.manifest.direct_dependencies.begin(), eco.manifest.direct_dependencies.end(),
                    [&](const DependencyDecl& d) { return d.package == pkg.id; })) {
      continue;
    }
    const auto count = pkg.releases.size();
    const auto first_pick = rng.below(count);
    const auto second_pick = rng.below(count);
    const auto index = std::min(first_pick, second_pick);
    const Scope scope = rng.chance(0.1) ? Scope::Test : Scope::Compile;
    eco.manifest.direct_dependencies.push_back(DependencyDecl{pkg.id, pkg.releases[index].version, scope});
  }

  // Usage: project methods reference constructs of the resolved graph, and
  // referenced constructs reach into their own dependencies.
  const DependencyGraph g = resolve_graph(eco.manifest, eco.registry);
  const ConstructId main_entry{ConstructKind::Method, "app.Main#main()"};
  const ConstructId run_entry{ConstructKind::Method, "app.Service#run()"};
  const ConstructId dead{ConstructKind::Method, "app.Unused#dead()"};
  UsageModel& u = eco.usage;
  u.entries = {main_entry, run_entry};
  for (const auto& c : {main_entry, run_entry, dead}) u.owner.emplace(c, std::nullopt);
  u.edges.emplace(main_entry, run_entry);

  std::map<PackageId, std::vector<ConstructId>> surface;
  for (const auto& [id, node] : g.nodes) {
    for (const auto& [c, fp] : eco.registry.release(id, node.version).api.entries) surface[id].push_back(c);
  }
  for (const auto& [id, node] : g.nodes) {
    for (const auto& c : surface[id]) {
      if (rng.chance(params.usage_density)) {
        u.owner.emplace(c, id);
        u.edges.emplace(rng.chance(0.5) ? main_entry : run_entry, c);
        for (const auto& d : eco.registry.release(id, node.version).dependencies) {
          auto it = surface.find(d.package);
          if (it == surface.end() || it->second.empty() || !rng.chance(params.usage_density)) continue;
          const auto& target = it->second[rng.below(it->second.size())];
          u.owner.emplace(target, d.package);
          u.edges.emplace(c, target);
        }
      } else if (rng.chance(0.2)) {
        u.owner.emplace(c, id);
        u.edges.emplace(dead, c);
      }
    }
  }
  validate_usage(u);
  return eco;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_bundle(const Ecosystem& eco, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::InvalidInput, dir.string() + ": cannot create directory: " + ec.message());
  auto write = [&](const char* name, const nlohmann::json& doc) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidInput, (dir / name).string() + ": cannot write file");
    out << dump_json(doc);
  };
  write("registry.json", registry_to_json(eco.registry));
  write("manifest.json", manifest_to_json(eco.manifest));
  write("usage.json", usage_to_json(eco.usage));
}

std::vector<PackageId> breaking_violations(const UpgradePlan& plan, const DependencyGraph& initial,
                                           const RegistryIndex& reg, const UsageModel& usage) {
  const UsageIndex index(usage);
  std::vector<PackageId> out;
  for (const auto& d : plan.decisions) {
    if (d.outcome != Outcome::Upgraded || !initial.contains(d.package) || !plan.final_graph.contains(d.package)) {
      continue;
    }
    const auto& before = reg.release(d.package, initial.version_of(d.package));
    const auto& after = reg.release(d.package, plan.final_graph.version_of(d.package));
    if (!is_compatible(index, d.package, before, after).compatible) out.push_back(d.package);
  }
  return out;
}

ComparisonReport compare_modes(const DependencyGraph& g, const RegistryIndex& reg, const UsageModel& usage) {
  auto row = [&](const UpgradePlan& plan) {
    ModeRow r;
    r.mode = plan.mode;
    r.nodes = plan.metrics_after.node_count;
    r.original_version_lag = plan.metrics_before.total_version_lag;
    r.reduced_version_lag = static_cast<std::int64_t>(plan.metrics_before.total_version_lag) -
                            static_cast<std::int64_t>(plan.metrics_after.total_version_lag);
    r.original_dep_count = plan.metrics_before.node_count;
    r.dep_count_delta = static_cast<std::int64_t>(plan.metrics_before.node_count) -
                        static_cast<std::int64_t>(plan.metrics_after.node_count);
    r.breaking_violations = breaking_violations(plan, g, reg, usage).size();
    return r;
  };
  return ComparisonReport{row(plan_upgrades(g, reg, usage)), row(baseline_direct_latest(g, reg))};
}

nlohmann::json comparison_to_json(const ComparisonReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto* r : {&report.lagease, &report.direct_latest}) {
    rows.push_back({{"mode", to_string(r->mode)},
                    {"nodes", r->nodes},
                    {"original_version_lag", r->original_version_lag},
                    {"reduced_version_lag", r->reduced_version_lag},
                    {"original_dep_count", r->original_dep_count},
                    {"dep_count_delta", r->dep_count_delta},
                    {"breaking_violations", r->breaking_violations}});
  }
  return {{"rows", std::move(rows)}};
}

std::string comparison_to_text(const ComparisonReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto* r : {&report.lagease, &report.direct_latest}) {
    rows.push_back({std::string(to_string(r->mode)), std::to_string(r->nodes), std::to_string(r->original_version_lag),
                    std::to_string(r->reduced_version_lag), std::to_string(r->original_dep_count),
                    std::to_string(r->dep_count_delta), std::to_string(r->breaking_violations)});
  }
  return format_table({"mode", "nodes", "original_version_lag", "reduced_version_lag", "original_dep_count",
                       "dep_count_delta", "breaking_violations"},
                      rows);
}

}  // namespace laglift
