#include "laglift/compat.hpp"

#include <algorithm>
#include <deque>

#include "json_util.hpp"
#include "laglift/error.hpp"

namespace laglift {

namespace {

constexpr std::string_view kProjectOwner = "<project>";

}  // namespace

void validate_usage(const UsageModel& u) {
  auto owned = [&](const ConstructId& c, const char* role) {
    if (!u.owner.count(c)) throw Error(ErrorKind::InvalidInput, std::string(role) + " " + c.str() + " has no owner");
  };
  for (const auto& [from, to] : u.edges) {
    owned(from, "edge source");
    owned(to, "edge target");
  }
  for (const auto& e : u.entries) {
    owned(e, "entry");
    if (u.owner.at(e).has_value()) {
      throw Error(ErrorKind::InvalidInput, "entry " + e.str() + " is owned by " + u.owner.at(e)->str() +
                                               ", not the project");
    }
  }
}

UsageModel parse_usage(std::string_view json_text, const std::string& source) {
  using detail::JsonCursor;
  const auto doc = detail::parse_json_text(json_text, source);
  const JsonCursor root(doc, source, "");
  root.expect_object({"entries", "edges", "owners"});

  UsageModel u;
  const JsonCursor entries = root.at("entries");
  for (std::size_t i = 0; i < entries.array_size(); ++i) {
    const JsonCursor e = entries.at(i);
    u.entries.insert(e.guarded([&] { return ConstructId::parse(e.string()); }));
  }

  const JsonCursor edges = root.at("edges");
  for (std::size_t i = 0; i < edges.array_size(); ++i) {
    const JsonCursor edge = edges.at(i);
    if (edge.array_size() != 2) edge.fail("edge must be a [from, to] pair");
    u.edges.emplace(edge.guarded([&] { return ConstructId::parse(edge.at(std::size_t{0}).string()); }),
                    edge.guarded([&] { return ConstructId::parse(edge.at(std::size_t{1}).string()); }));
  }

  const JsonCursor owners = root.at("owners");
  if (!owners.node().is_object()) owners.fail("expected an object");
  for (const auto& [key, value] : owners.node().items()) {
    const JsonCursor o = owners.at(key);
    const ConstructId c = o.guarded([&] { return ConstructId::parse(key); });
    const std::string who = o.string();
    u.owner.emplace(c, who == kProjectOwner ? NodeRef{} : NodeRef{o.guarded([&] { return PackageId::parse(who); })});
  }

  try {
    validate_usage(u);
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
  return u;
}

UsageModel load_usage(const std::filesystem::path& path) {
  return parse_usage(detail::read_file(path), path.string());
}

nlohmann::json usage_to_json(const UsageModel& u) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : u.entries) entries.push_back(e.str());
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [from, to] : u.edges) edges.push_back({from.str(), to.str()});
  nlohmann::json owners = nlohmann::json::object();
  for (const auto& [c, who] : u.owner) owners[c.str()] = who ? who->str() : std::string(kProjectOwner);
  return {{"entries", std::move(entries)}, {"edges", std::move(edges)}, {"owners", std::move(owners)}};
}

std::set<ConstructId> reachable_constructs(const UsageModel& u) {
  std::map<ConstructId, std::vector<ConstructId>> succ;
  for (const auto& [from, to] : u.edges) succ[from].push_back(to);

  std::set<ConstructId> seen(u.entries.begin(), u.entries.end());
  std::deque<ConstructId> work(u.entries.begin(), u.entries.end());
  while (!work.empty()) {
    const ConstructId c = std::move(work.front());
    work.pop_front();
    auto it = succ.find(c);
    if (it == succ.end()) continue;
    for (const auto& next : it->second) {
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  return seen;
}

std::set<ConstructId> reachable_used_constructs(const UsageModel& u, const PackageId& p) {
  std::set<ConstructId> out;
  for (const auto& c : reachable_constructs(u)) {
    auto it = u.owner.find(c);
    if (it != u.owner.end() && it->second == p) out.insert(c);
  }
  return out;
}

UsageIndex::UsageIndex(const UsageModel& u) {
  for (const auto& c : reachable_constructs(u)) {
    auto it = u.owner.find(c);
    if (it != u.owner.end() && it->second) used_[*it->second].insert(c);
  }
}

const std::set<ConstructId>& UsageIndex::used_in(const PackageId& p) const {
  static const std::set<ConstructId> kNone;
  auto it = used_.find(p);
  return it == used_.end() ? kNone : it->second;
}

CompatVerdict is_compatible(const UsageIndex& usage, const PackageId& p, const Release& old_release,
                            const Release& candidate) {
  if (old_release.package != p || candidate.package != p) {
    throw Error(ErrorKind::PackageMismatch, "compatibility check for " + p.str() + " given releases " +
                                                old_release.coordinate() + " and " + candidate.coordinate());
  }
  const auto broken = breaking_changes(old_release.api, candidate.api).all();
  const auto& used = usage.used_in(p);
  CompatVerdict out;
  std::set_intersection(broken.begin(), broken.end(), used.begin(), used.end(),
                        std::inserter(out.evidence, out.evidence.end()));
  out.compatible = out.evidence.empty();
  return out;
}

CompatVerdict is_compatible(const UsageModel& u, const PackageId& p, const Release& old_release,
                            const Release& candidate) {
  return is_compatible(UsageIndex(u), p, old_release, candidate);
}

}  // namespace laglift
