#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "laglift/api.hpp"
#include "laglift/package.hpp"
#include "laglift/registry.hpp"

namespace laglift {

/// Construct-level reference graph of the project: the project's entry
/// constructs, reference/call/def-use edges, and which package (or the
/// project, as nullopt) owns each construct.
struct UsageModel {
  std::set<ConstructId> entries;
  std::set<std::pair<ConstructId, ConstructId>> edges;
  std::map<ConstructId, NodeRef> owner;
};

/// Throws Error{InvalidInput} when an edge endpoint has no owner or an entry
/// is not owned by the project.
void validate_usage(const UsageModel& u);

UsageModel load_usage(const std::filesystem::path& path);
UsageModel parse_usage(std::string_view json_text, const std::string& source = "<usage>");
nlohmann::json usage_to_json(const UsageModel& u);

/// Every construct reachable from an entry (entries included).
std::set<ConstructId> reachable_constructs(const UsageModel& u);

/// Reachable constructs owned by `p`.
std::set<ConstructId> reachable_used_constructs(const UsageModel& u, const PackageId& p);

/// Reachable constructs grouped by owning package, computed once per model.
class UsageIndex {
 public:
  explicit UsageIndex(const UsageModel& u);
  const std::set<ConstructId>& used_in(const PackageId& p) const;

 private:
  std::map<PackageId, std::set<ConstructId>> used_;
};

struct CompatVerdict {
  bool compatible = true;
  std::set<ConstructId> evidence;  // broken constructs the project reaches
};

/// Compatible iff no construct that `candidate` removes or changes relative to
/// `old_release` is reachable from the project. Throws Error{PackageMismatch}
/// when either release belongs to another package.
CompatVerdict is_compatible(const UsageModel& u, const PackageId& p, const Release& old_release,
                            const Release& candidate);
CompatVerdict is_compatible(const UsageIndex& usage, const PackageId& p, const Release& old_release,
                            const Release& candidate);

}  // namespace laglift
