#include "laglift/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "laglift/error.hpp"

// Second implementation of the per-node filters. It shares no filter code with
// the planner: closures are counted by resolving a one-dependency project,
// API diffs and reachability are plain quadratic scans.

namespace laglift {

namespace {

std::size_t naive_closure(const RegistryIndex& reg, const PackageId& p, const Version& v) {
  const RootManifest solo{"oracle", {DependencyDecl{p, v, Scope::Compile}}};
  return resolve_graph(solo, reg).nodes.size() - 1;
}

std::vector<ConstructId> naive_broken(const ApiSurface& old_api, const ApiSurface& new_api) {
  std::vector<ConstructId> out;
  for (const auto& [id, fp] : old_api.entries) {
    bool kept_same = false;
    for (const auto& [other, other_fp] : new_api.entries) {
      if (other == id && other_fp == fp) kept_same = true;
    }
    if (!kept_same) out.push_back(id);
  }
  return out;
}

std::vector<ConstructId> naive_reachable(const UsageModel& u) {
  std::vector<ConstructId> reached(u.entries.begin(), u.entries.end());
  auto has = [&](const ConstructId& c) { return std::find(reached.begin(), reached.end(), c) != reached.end(); };
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [from, to] : u.edges) {
      if (has(from) && !has(to)) {
        reached.push_back(to);
        grew = true;
      }
    }
  }
  return reached;
}

struct Expected {
  Outcome outcome = Outcome::KeptNoCandidates;
  Version from;
  Version to;
  std::vector<Rejection> rejected;
};

Expected expect_decision(const RegistryIndex& reg, const std::vector<ConstructId>& reached, const UsageModel& u,
                         const PackageId& p, const Version& current, const std::optional<Version>& original) {
  Expected e{Outcome::KeptNoCandidates, current, current, {}};
  std::vector<Version> candidates;
  for (const auto& r : reg.releases_of(p)) {
    if (r.version.is_stable() && current < r.version) candidates.push_back(r.version);
  }
  if (candidates.empty()) return e;

  std::vector<ConstructId> used;
  for (const auto& c : reached) {
    auto it = u.owner.find(c);
    if (it != u.owner.end() && it->second == p) used.push_back(c);
  }

  const std::size_t base = naive_closure(reg, p, current);
  // A candidate must be safe for the release in use now and for the one the
  // project was originally built with.
  std::vector<const Release*> baselines{&reg.release(p, current)};
  if (original) baselines.push_back(&reg.release(p, *original));
  std::vector<Version> survivors;
  for (const auto& v : candidates) {
    if (naive_closure(reg, p, v) > base) {
      e.rejected.push_back(Rejection{v, RejectReason::Debloat, {}});
      continue;
    }
    std::set<ConstructId> evidence;
    for (const Release* base_release : baselines) {
      for (const auto& b : naive_broken(base_release->api, reg.release(p, v).api)) {
        if (std::find(used.begin(), used.end(), b) != used.end()) evidence.insert(b);
      }
    }
    if (evidence.empty()) survivors.push_back(v);
    else e.rejected.push_back(Rejection{v, RejectReason::Incompatible, std::move(evidence)});
  }
  if (survivors.empty()) {
    e.outcome = Outcome::KeptAllFiltered;
    return e;
  }
  Version best = survivors.front();
  for (const auto& v : survivors) {
    if (best < v) best = v;
  }
  e.outcome = Outcome::Upgraded;
  e.to = best;
  return e;
}

std::string describe(const std::vector<Rejection>& rejected) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rejected.size(); ++i) {
    if (i) out << ", ";
    out << rejected[i].version.raw() << ' ' << to_string(rejected[i].reason);
    for (const auto& c : rejected[i].evidence) out << ' ' << c.str();
  }
  out << ']';
  return out.str();
}

bool same_rejections(const std::vector<Rejection>& a, const std::vector<Rejection>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].version.raw() != b[i].version.raw() || a[i].reason != b[i].reason || a[i].evidence != b[i].evidence) {
      return false;
    }
  }
  return true;
}

std::string metrics_str(const GraphMetrics& m) {
  return "{nodes " + std::to_string(m.node_count) + ", version lag " + std::to_string(m.total_version_lag) +
         ", time lag " + std::to_string(m.total_time_lag_days) + "}";
}

Verdict verify_lagease(const UpgradePlan& plan, const DependencyGraph& initial, const RegistryIndex& reg,
                       const UsageModel& usage) {
  Verdict verdict;
  auto fail = [&](const std::string& message) {
    verdict.pass = false;
    verdict.failures.push_back(message);
  };

  const auto reached = naive_reachable(usage);
  DependencyGraph current = initial;
  std::vector<PackageId> order = traversal_order(initial);
  std::set<PackageId> scheduled(order.begin(), order.end());
  std::map<PackageId, Version> last_seen;
  for (const auto& [id, node] : initial.nodes) last_seen.emplace(id, node.version);

  for (std::size_t i = 0; i < plan.decisions.size(); ++i) {
    const NodeDecision& d = plan.decisions[i];
    const std::string where = "decision " + std::to_string(i + 1) + " (" + d.package.str() + "): ";
    if (i >= order.size()) {
      fail(where + "no node left to visit");
      return verdict;
    }
    if (d.package != order[i]) {
      fail(where + "expected node " + order[i].str() + " at this position");
      return verdict;
    }

    Expected e;
    if (!current.contains(d.package)) {
      const Version& last = last_seen.at(d.package);
      e = Expected{Outcome::SkippedNodeVanished, last, last, {}};
    } else {
      const auto original =
          initial.contains(d.package) ? std::optional<Version>(initial.version_of(d.package)) : std::nullopt;
      e = expect_decision(reg, reached, usage, d.package, current.version_of(d.package), original);
    }

    if (d.outcome != e.outcome) {
      fail(where + "outcome " + std::string(to_string(d.outcome)) + ", expected " + std::string(to_string(e.outcome)));
      return verdict;
    }
    if (d.from.raw() != e.from.raw()) {
      fail(where + "from " + d.from.raw() + ", expected " + e.from.raw());
      return verdict;
    }
    if (d.to.raw() != e.to.raw()) {
      fail(where + "to " + d.to.raw() + ", expected " + e.to.raw() + " (latest surviving candidate)");
      return verdict;
    }
    if (!same_rejections(d.rejected, e.rejected)) {
      fail(where + "rejections " + describe(d.rejected) + ", expected " + describe(e.rejected));
      return verdict;
    }

    if (d.outcome == Outcome::Upgraded) {
      current = update_graph(current, d.package, d.to, reg);
      for (const auto& [id, node] : current.nodes) last_seen.insert_or_assign(id, node.version);
      for (const auto& id : traversal_order(current)) {
        if (scheduled.insert(id).second) order.push_back(id);
      }
    }
  }
  if (plan.decisions.size() < order.size()) {
    fail("plan stops after " + std::to_string(plan.decisions.size()) + " decisions; node " +
         order[plan.decisions.size()].str() + " was never visited");
    return verdict;
  }
  const auto after = graph_metrics(current, reg);
  if (after != plan.metrics_after) {
    fail("metrics_after " + metrics_str(plan.metrics_after) + ", replay gives " + metrics_str(after));
  }
  return verdict;
}

Verdict verify_direct_latest(const UpgradePlan& plan, const DependencyGraph& initial, const RegistryIndex& reg) {
  Verdict verdict;
  auto fail = [&](const std::string& message) {
    verdict.pass = false;
    verdict.failures.push_back(message);
  };
  const auto direct = initial.direct_dependencies();
  if (plan.decisions.size() != direct.size()) {
    fail("plan has " + std::to_string(plan.decisions.size()) + " decisions for " + std::to_string(direct.size()) +
         " direct dependencies");
    return verdict;
  }
  std::map<PackageId, Version> upgrades;
  for (std::size_t i = 0; i < direct.size(); ++i) {
    const auto& d = plan.decisions[i];
    const std::string where = "decision " + std::to_string(i + 1) + " (" + d.package.str() + "): ";
    const Version& from = initial.version_of(direct[i]);
    std::optional<Version> newest;
    for (const auto& r : reg.releases_of(direct[i])) {
      if (r.version.is_stable() && from < r.version) newest = r.version;
    }
    const Version to = newest.value_or(from);
    const Outcome outcome = newest ? Outcome::Upgraded : Outcome::KeptNoCandidates;
    if (d.package != direct[i] || d.from.raw() != from.raw() || d.to.raw() != to.raw() || d.outcome != outcome ||
        !d.rejected.empty()) {
      fail(where + "expected " + direct[i].str() + " " + from.raw() + " -> " + to.raw() + " " +
           std::string(to_string(outcome)));
      return verdict;
    }
    if (newest) upgrades.emplace(direct[i], to);
  }
  const auto after = graph_metrics(upgrades.empty() ? initial : update_graph(initial, upgrades, reg), reg);
  if (after != plan.metrics_after) {
    fail("metrics_after " + metrics_str(plan.metrics_after) + ", replay gives " + metrics_str(after));
  }
  return verdict;
}

}  // namespace

Verdict oracle_verify_plan(const UpgradePlan& plan, const DependencyGraph& initial, const RegistryIndex& reg,
                           const UsageModel& usage) {
  Verdict verdict;
  try {
    const auto before = graph_metrics(initial, reg);
    if (before != plan.metrics_before) {
      verdict.pass = false;
      verdict.failures.push_back("metrics_before " + metrics_str(plan.metrics_before) + ", inputs give " +
                                 metrics_str(before));
      return verdict;
    }
    return plan.mode == PlanMode::LagEase ? verify_lagease(plan, initial, reg, usage)
                                          : verify_direct_latest(plan, initial, reg);
  } catch (const Error& e) {
    verdict.pass = false;
    verdict.failures.push_back(std::string("replay failed: ") + e.what());
    return verdict;
  }
}

}  // namespace laglift
