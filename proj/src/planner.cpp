#include "laglift/planner.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "json_util.hpp"
#include "laglift/error.hpp"

namespace laglift {

namespace {

using OrderKey = std::pair<std::size_t, PackageId>;

std::vector<std::vector<PackageId>> strongly_connected(const std::set<PackageId>& nodes,
                                                       const std::set<std::pair<PackageId, PackageId>>& edges) {
  std::map<PackageId, std::vector<PackageId>> succ;
  for (const auto& [a, b] : edges) succ[a].push_back(b);

  std::map<PackageId, int> index, low;
  std::set<PackageId> on_stack;
  std::vector<PackageId> stack;
  std::vector<std::vector<PackageId>> out;
  int counter = 0;

  std::function<void(const PackageId&)> visit = [&](const PackageId& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : succ[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<PackageId> component;
      PackageId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      out.push_back(std::move(component));
    }
  };
  for (const auto& v : nodes) {
    if (!index.count(v)) visit(v);
  }
  return out;
}

std::string join_evidence(const std::set<ConstructId>& evidence) {
  std::string out;
  for (const auto& c : evidence) out += (out.empty() ? "" : ",") + c.str();
  return out;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Upgraded: return "upgraded";
    case Outcome::KeptNoCandidates: return "kept-no-candidates";
    case Outcome::KeptAllFiltered: return "kept-all-filtered";
    case Outcome::SkippedNodeVanished: return "skipped-node-vanished";
  }
  return "kept-no-candidates";
}

std::string_view to_string(RejectReason reason) {
  return reason == RejectReason::Debloat ? "debloat" : "incompatible";
}

std::string_view to_string(PlanMode mode) { return mode == PlanMode::LagEase ? "lagease" : "direct-latest"; }

Outcome parse_outcome(std::string_view text) {
  for (auto o : {Outcome::Upgraded, Outcome::KeptNoCandidates, Outcome::KeptAllFiltered,
                 Outcome::SkippedNodeVanished}) {
    if (text == to_string(o)) return o;
  }
  throw Error(ErrorKind::Parse, "unknown outcome '" + std::string(text) + "'");
}

RejectReason parse_reject_reason(std::string_view text) {
  if (text == "debloat") return RejectReason::Debloat;
  if (text == "incompatible") return RejectReason::Incompatible;
  throw Error(ErrorKind::Parse, "unknown rejection reason '" + std::string(text) + "'");
}

PlanMode parse_plan_mode(std::string_view text) {
  if (text == "lagease") return PlanMode::LagEase;
  if (text == "direct-latest") return PlanMode::DirectLatest;
  throw Error(ErrorKind::Parse, "unknown plan mode '" + std::string(text) + "'");
}

std::vector<PackageId> traversal_order(const DependencyGraph& g) {
  std::set<PackageId> nodes;
  std::map<PackageId, OrderKey> key;
  for (const auto& [id, node] : g.nodes) {
    nodes.insert(id);
    key.emplace(id, OrderKey{node.depth, id});
  }
  std::set<std::pair<PackageId, PackageId>> edges;
  for (const auto& [edge, declared] : g.edges) {
    if (edge.first) edges.emplace(*edge.first, edge.second);
  }

  for (;;) {
    bool cyclic = false;
    for (const auto& component : strongly_connected(nodes, edges)) {
      if (component.size() < 2) continue;
      cyclic = true;
      const std::set<PackageId> members(component.begin(), component.end());
      std::optional<std::pair<PackageId, PackageId>> drop;
      for (const auto& [from, to] : edges) {
        if (!members.count(from) || !members.count(to) || !(key.at(to) < key.at(from))) continue;
        if (!drop || std::tie(key.at(to), key.at(from)) > std::tie(key.at(drop->second), key.at(drop->first))) {
          drop.emplace(from, to);
        }
      }
      if (!drop) throw Error(ErrorKind::Invariant, "cycle without a back-edge");
      edges.erase(*drop);
    }
    if (!cyclic) break;
  }

  std::map<PackageId, std::size_t> indegree;
  std::map<PackageId, std::vector<PackageId>> succ;
  for (const auto& id : nodes) indegree[id] = 0;
  for (const auto& [from, to] : edges) {
    ++indegree[to];
    succ[from].push_back(to);
  }
  std::priority_queue<OrderKey, std::vector<OrderKey>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(key.at(id));
  }
  std::vector<PackageId> order;
  while (!ready.empty()) {
    const PackageId id = ready.top().second;
    ready.pop();
    order.push_back(id);
    for (const auto& next : succ[id]) {
      if (--indegree[next] == 0) ready.push(key.at(next));
    }
  }
  if (order.size() != nodes.size()) throw Error(ErrorKind::Invariant, "traversal order left nodes unvisited");
  return order;
}

std::vector<Version> candidate_versions(const RegistryIndex& reg, const PackageId& p, const Version& current) {
  reg.release(p, current);
  std::vector<Version> out;
  for (const auto& r : reg.releases_of(p)) {
    if (r.version.is_stable() && current < r.version) out.push_back(r.version);
  }
  return out;
}

FilterResult filter_debloat(std::span<const Version> candidates, const PackageId& p, const Version& current,
                            const RegistryIndex& reg) {
  FilterResult out;
  const std::size_t baseline = reg.closure_size(p, current);
  for (const auto& v : candidates) {
    if (reg.closure_size(p, v) <= baseline) out.kept.push_back(v);
    else out.rejected.push_back(Rejection{v, RejectReason::Debloat, {}});
  }
  return out;
}

FilterResult filter_compat(std::span<const Version> candidates, const PackageId& p, const Version& current,
                           const UsageIndex& usage, const RegistryIndex& reg,
                           const std::optional<Version>& original) {
  FilterResult out;
  const Release& current_release = reg.release(p, current);
  const Release* original_release = original && *original != current ? &reg.release(p, *original) : nullptr;
  for (const auto& v : candidates) {
    const Release& candidate = reg.release(p, v);
    auto verdict = is_compatible(usage, p, current_release, candidate);
    if (original_release) {
      auto against_original = is_compatible(usage, p, *original_release, candidate);
      verdict.evidence.merge(against_original.evidence);
      verdict.compatible = verdict.evidence.empty();
    }
    if (verdict.compatible) out.kept.push_back(v);
    else out.rejected.push_back(Rejection{v, RejectReason::Incompatible, std::move(verdict.evidence)});
  }
  return out;
}

std::optional<Version> select_optimal(std::span<const Version> filtered) {
  if (filtered.empty()) return std::nullopt;
  return filtered.back();
}

UpgradePlan plan_upgrades(const DependencyGraph& g, const RegistryIndex& reg, const UsageModel& u) {
  const UsageIndex usage(u);
  UpgradePlan plan;
  plan.mode = PlanMode::LagEase;
  plan.metrics_before = graph_metrics(g, reg);

  DependencyGraph current = g;
  std::vector<PackageId> order = traversal_order(g);
  std::set<PackageId> scheduled(order.begin(), order.end());
  std::map<PackageId, Version> last_seen;
  for (const auto& [id, node] : g.nodes) last_seen.emplace(id, node.version);

  for (std::size_t i = 0; i < order.size(); ++i) {
    const PackageId p = order[i];
    try {
      NodeDecision decision;
      decision.package = p;
      if (!current.contains(p)) {
        decision.from = decision.to = last_seen.at(p);
        decision.outcome = Outcome::SkippedNodeVanished;
        plan.decisions.push_back(std::move(decision));
        continue;
      }
      const Version from = current.version_of(p);
      decision.from = decision.to = from;

      const auto candidates = candidate_versions(reg, p, from);
      if (candidates.empty()) {
        decision.outcome = Outcome::KeptNoCandidates;
        plan.decisions.push_back(std::move(decision));
        continue;
      }
      auto debloated = filter_debloat(candidates, p, from, reg);
      const auto original = g.contains(p) ? std::optional<Version>(g.version_of(p)) : std::nullopt;
      auto compatible = filter_compat(debloated.kept, p, from, usage, reg, original);
      decision.rejected = std::move(debloated.rejected);
      for (auto& r : compatible.rejected) decision.rejected.push_back(std::move(r));
      std::sort(decision.rejected.begin(), decision.rejected.end(),
                [](const Rejection& a, const Rejection& b) { return a.version < b.version; });

      const auto chosen = select_optimal(compatible.kept);
      if (!chosen) {
        decision.outcome = Outcome::KeptAllFiltered;
        plan.decisions.push_back(std::move(decision));
        continue;
      }
      decision.to = *chosen;
      decision.outcome = Outcome::Upgraded;
      plan.decisions.push_back(std::move(decision));

      current = update_graph(current, p, *chosen, reg);
      for (const auto& [id, node] : current.nodes) last_seen.insert_or_assign(id, node.version);
      std::vector<PackageId> fresh;
      for (const auto& id : traversal_order(current)) {
        if (scheduled.insert(id).second) fresh.push_back(id);
      }
      order.insert(order.end(), fresh.begin(), fresh.end());
    } catch (const Error& e) {
      throw Error(e.kind(), "iteration " + std::to_string(i + 1) + " (" + p.str() + "): " + e.what());
    }
  }

  plan.metrics_after = graph_metrics(current, reg);
  plan.final_graph = std::move(current);
  return plan;
}

UpgradePlan baseline_direct_latest(const DependencyGraph& g, const RegistryIndex& reg) {
  UpgradePlan plan;
  plan.mode = PlanMode::DirectLatest;
  plan.metrics_before = graph_metrics(g, reg);

  std::map<PackageId, Version> upgrades;
  for (const auto& p : g.direct_dependencies()) {
    NodeDecision decision;
    decision.package = p;
    decision.from = decision.to = g.version_of(p);
    const auto newer = candidate_versions(reg, p, decision.from);
    if (!newer.empty()) {
      decision.to = newer.back();
      decision.outcome = Outcome::Upgraded;
      upgrades.emplace(p, decision.to);
    }
    plan.decisions.push_back(std::move(decision));
  }
  DependencyGraph next = upgrades.empty() ? g : update_graph(g, upgrades, reg);
  plan.metrics_after = graph_metrics(next, reg);
  plan.final_graph = std::move(next);
  return plan;
}

nlohmann::json metrics_to_json(const GraphMetrics& m) {
  return {{"node_count", m.node_count},
          {"total_version_lag", m.total_version_lag},
          {"total_time_lag_days", m.total_time_lag_days}};
}

std::string metrics_to_text(const GraphMetrics& m) {
  return format_table({"nodes", "total_version_lag", "total_time_lag_days"},
                      {{std::to_string(m.node_count), std::to_string(m.total_version_lag),
                        std::to_string(m.total_time_lag_days)}});
}

nlohmann::json plan_to_json(const UpgradePlan& plan) {
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto& d : plan.decisions) {
    nlohmann::json rejected = nlohmann::json::array();
    for (const auto& r : d.rejected) {
      nlohmann::json evidence = nlohmann::json::array();
      for (const auto& c : r.evidence) evidence.push_back(c.str());
      rejected.push_back({{"version", r.version.raw()}, {"reason", to_string(r.reason)}, {"evidence", evidence}});
    }
    decisions.push_back({{"package", d.package.str()},
                         {"from", d.from.raw()},
                         {"to", d.to.raw()},
                         {"outcome", to_string(d.outcome)},
                         {"rejected", std::move(rejected)}});
  }
  return {{"mode", to_string(plan.mode)},
          {"metrics_before", metrics_to_json(plan.metrics_before)},
          {"metrics_after", metrics_to_json(plan.metrics_after)},
          {"decisions", std::move(decisions)}};
}

UpgradePlan plan_from_json(const nlohmann::json& doc, const std::string& source) {
  using detail::JsonCursor;
  const JsonCursor root(doc, source, "");
  root.expect_object({"mode", "metrics_before", "metrics_after", "decisions"});

  auto metrics = [](const JsonCursor& c) {
    c.expect_object({"node_count", "total_version_lag", "total_time_lag_days"});
    GraphMetrics m;
    try {
      m.node_count = c.at("node_count").node().get<std::size_t>();
      m.total_version_lag = c.at("total_version_lag").node().get<std::uint64_t>();
      m.total_time_lag_days = c.at("total_time_lag_days").node().get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
      c.fail(std::string("bad metric value: ") + e.what());
    }
    return m;
  };

  UpgradePlan plan;
  plan.mode = root.at("mode").guarded([&] { return parse_plan_mode(root.at("mode").string()); });
  plan.metrics_before = metrics(root.at("metrics_before"));
  plan.metrics_after = metrics(root.at("metrics_after"));

  const JsonCursor decisions = root.at("decisions");
  for (std::size_t i = 0; i < decisions.array_size(); ++i) {
    const JsonCursor d = decisions.at(i);
    d.expect_object({"package", "from", "to", "outcome", "rejected"});
    NodeDecision nd = d.guarded([&] {
      NodeDecision x;
      x.package = PackageId::parse(d.at("package").string());
      x.from = Version::parse(d.at("from").string());
      x.to = Version::parse(d.at("to").string());
      x.outcome = parse_outcome(d.at("outcome").string());
      return x;
    });
    const JsonCursor rejected = d.at("rejected");
    for (std::size_t j = 0; j < rejected.array_size(); ++j) {
      const JsonCursor r = rejected.at(j);
      r.expect_object({"version", "reason", "evidence"});
      Rejection rej = r.guarded([&] {
        return Rejection{Version::parse(r.at("version").string()), parse_reject_reason(r.at("reason").string()), {}};
      });
      const JsonCursor evidence = r.at("evidence");
      for (std::size_t k = 0; k < evidence.array_size(); ++k) {
        const JsonCursor e = evidence.at(k);
        rej.evidence.insert(e.guarded([&] { return ConstructId::parse(e.string()); }));
      }
      nd.rejected.push_back(std::move(rej));
    }
    plan.decisions.push_back(std::move(nd));
  }
  return plan;
}

UpgradePlan parse_plan(std::string_view json_text, const std::string& source) {
  return plan_from_json(detail::parse_json_text(json_text, source), source);
}

std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      text += cells[c];
      if (c + 1 < cells.size()) text += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    text.erase(text.find_last_not_of(' ') + 1);
    out << text << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

std::string plan_to_text(const UpgradePlan& plan) {
  const auto& b = plan.metrics_before;
  const auto& a = plan.metrics_after;
  std::ostringstream out;
  out << format_table(
      {"mode", "nodes", "original_version_lag", "reduced_version_lag", "original_time_lag_days",
       "reduced_time_lag_days", "original_dep", "reduced_dep"},
      {{std::string(to_string(plan.mode)), std::to_string(a.node_count), std::to_string(b.total_version_lag),
        std::to_string(static_cast<std::int64_t>(b.total_version_lag) - static_cast<std::int64_t>(a.total_version_lag)),
        std::to_string(b.total_time_lag_days), std::to_string(b.total_time_lag_days - a.total_time_lag_days),
        std::to_string(b.node_count),
        std::to_string(static_cast<std::int64_t>(b.node_count) - static_cast<std::int64_t>(a.node_count))}});
  out << '\n';
  std::vector<std::vector<std::string>> rows;
  for (const auto& d : plan.decisions) {
    std::string rejected;
    for (const auto& r : d.rejected) {
      if (!rejected.empty()) rejected += "; ";
      rejected += r.version.raw() + " " + std::string(to_string(r.reason));
      if (!r.evidence.empty()) rejected += " [" + join_evidence(r.evidence) + "]";
    }
    rows.push_back({d.package.str(), d.from.raw(), d.to.raw(), std::string(to_string(d.outcome)), rejected});
  }
  out << format_table({"package", "from", "to", "outcome", "rejected"}, rows);
  return out.str();
}

}  // namespace laglift
