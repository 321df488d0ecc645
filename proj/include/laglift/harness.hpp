#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "laglift/compat.hpp"
#include "laglift/graph.hpp"
#include "laglift/planner.hpp"
#include "laglift/registry.hpp"

namespace laglift {

struct EcosystemParams {
  std::uint64_t seed = 1;
  int package_count = 8;
  int max_versions = 5;
  int max_deps_per_release = 3;
  double breaking_probability = 0.25;
  double usage_density = 0.5;
};

/// Throws Error{InvalidInput} when a field is out of range.
void validate_params(const EcosystemParams& params);

struct Ecosystem {
  RegistryIndex registry;
  RootManifest manifest;
  UsageModel usage;
};

/// Synthetic closed-world ecosystem, a pure function of `params`.
///
/// Package i only ever declares packages generated after it, so the declared
/// graph is acyclic. Release timestamps increase per package. Between
/// consecutive releases each construct is removed or re-fingerprinted with
/// `breaking_probability`; the project references constructs of the resolved
/// graph with `usage_density`.
Ecosystem gen_ecosystem(const EcosystemParams& params);

/// Serialized form used for fixture bundles: two-space indented JSON plus a
/// trailing newline.
std::string dump_json(const nlohmann::json& doc);

/// Writes registry.json, manifest.json and usage.json into `dir`.
void write_bundle(const Ecosystem& eco, const std::filesystem::path& dir);

/// Upgraded nodes of the initial graph whose final release breaks a construct
/// the project reaches, judged against the node's original release.
std::vector<PackageId> breaking_violations(const UpgradePlan& plan, const DependencyGraph& initial,
                                           const RegistryIndex& reg, const UsageModel& usage);

struct ModeRow {
  PlanMode mode = PlanMode::LagEase;
  std::size_t nodes = 0;  // final graph
  std::uint64_t original_version_lag = 0;
  std::int64_t reduced_version_lag = 0;
  std::size_t original_dep_count = 0;
  std::int64_t dep_count_delta = 0;  // nodes before minus nodes after
  std::size_t breaking_violations = 0;
};

struct ComparisonReport {
  ModeRow lagease;
  ModeRow direct_latest;
};

ComparisonReport compare_modes(const DependencyGraph& g, const RegistryIndex& reg, const UsageModel& usage);
nlohmann::json comparison_to_json(const ComparisonReport& report);
std::string comparison_to_text(const ComparisonReport& report);

}  // namespace laglift
