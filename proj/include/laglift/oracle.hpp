#pragma once

#include <string>
#include <vector>

#include "laglift/compat.hpp"
#include "laglift/graph.hpp"
#include "laglift/planner.hpp"
#include "laglift/registry.hpp"

namespace laglift {

struct Verdict {
  bool pass = true;
  std::vector<std::string> failures;  // first divergence, then anything after it
};

/// Replays a plan against its inputs with a second, deliberately naive
/// implementation of candidate enumeration, closure counting, API diffing and
/// construct reachability, and checks every recorded decision.
Verdict oracle_verify_plan(const UpgradePlan& plan, const DependencyGraph& initial, const RegistryIndex& reg,
                           const UsageModel& usage);

}  // namespace laglift
