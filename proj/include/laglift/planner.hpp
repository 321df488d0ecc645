#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "laglift/compat.hpp"
#include "laglift/graph.hpp"
#include "laglift/registry.hpp"

namespace laglift {

enum class Outcome { Upgraded, KeptNoCandidates, KeptAllFiltered, SkippedNodeVanished };
enum class RejectReason { Debloat, Incompatible };
enum class PlanMode { LagEase, DirectLatest };

std::string_view to_string(Outcome outcome);
std::string_view to_string(RejectReason reason);
std::string_view to_string(PlanMode mode);
Outcome parse_outcome(std::string_view text);
RejectReason parse_reject_reason(std::string_view text);
PlanMode parse_plan_mode(std::string_view text);

struct Rejection {
  Version version;
  RejectReason reason = RejectReason::Debloat;
  std::set<ConstructId> evidence;  // empty for debloat
};

struct NodeDecision {
  PackageId package;
  Version from;
  Version to;  // equals `from` unless upgraded
  Outcome outcome = Outcome::KeptNoCandidates;
  std::vector<Rejection> rejected;
};

struct UpgradePlan {
  PlanMode mode = PlanMode::LagEase;
  GraphMetrics metrics_before;
  GraphMetrics metrics_after;
  std::vector<NodeDecision> decisions;  // in execution order
  DependencyGraph final_graph;          // not serialized
};

/// Non-root nodes with dependents before their dependencies. Ready nodes are
/// taken by (depth, package id). Cycles are broken for ordering only: in each
/// strongly connected component the back-edge (one pointing to a smaller
/// (depth, id) key) with the greatest target is dropped, repeatedly, until the
/// graph is acyclic.
std::vector<PackageId> traversal_order(const DependencyGraph& g);

/// Stable versions strictly newer than `current`, ascending.
std::vector<Version> candidate_versions(const RegistryIndex& reg, const PackageId& p, const Version& current);

struct FilterResult {
  std::vector<Version> kept;
  std::vector<Rejection> rejected;
};

/// Keeps candidates whose isolated closure is no larger than the current one.
FilterResult filter_debloat(std::span<const Version> candidates, const PackageId& p, const Version& current,
                            const RegistryIndex& reg);

/// Keeps candidates that break no construct the project reaches, judged
/// against `current` and, when given and different, against the `original`
/// release the project was built with. Evidence is the union of both checks.
FilterResult filter_compat(std::span<const Version> candidates, const PackageId& p, const Version& current,
                           const UsageIndex& usage, const RegistryIndex& reg,
                           const std::optional<Version>& original = std::nullopt);

/// Latest of an ascending list, or nullopt (keep) when empty.
std::optional<Version> select_optimal(std::span<const Version> filtered);

/// Runs the full restore-traverse-filter-select-update loop.
UpgradePlan plan_upgrades(const DependencyGraph& g, const RegistryIndex& reg, const UsageModel& u);

/// Moves every direct dependency to its latest stable release, unfiltered,
/// and re-resolves once.
UpgradePlan baseline_direct_latest(const DependencyGraph& g, const RegistryIndex& reg);

nlohmann::json plan_to_json(const UpgradePlan& plan);
/// Reads the serialized form back; final_graph is left empty.
UpgradePlan plan_from_json(const nlohmann::json& doc, const std::string& source = "<plan>");
UpgradePlan parse_plan(std::string_view json_text, const std::string& source = "<plan>");
std::string plan_to_text(const UpgradePlan& plan);

nlohmann::json metrics_to_json(const GraphMetrics& m);
std::string metrics_to_text(const GraphMetrics& m);

/// Left-aligned columns separated by two spaces.
std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace laglift
