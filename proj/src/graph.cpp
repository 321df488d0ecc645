#include "laglift/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "laglift/error.hpp"

namespace laglift {

namespace {

using detail::JsonCursor;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// Adds every graph-scope declaration among nodes as an edge and assigns
// breadth-first depths. Root edges come from `root_decls`.
void connect(DependencyGraph& g, const RegistryIndex& reg) {
  g.edges.clear();
  g.diagnostics.clear();
  for (const auto& d : g.root_declarations) {
    if (is_graph_scope(d.scope) && g.contains(d.package)) g.edges.emplace(EdgeKey{std::nullopt, d.package}, d.version);
  }
  for (const auto& [id, node] : g.nodes) {
    for (const auto& d : reg.release(id, node.version).dependencies) {
      if (!is_graph_scope(d.scope)) continue;
      if (g.contains(d.package)) {
        g.edges.emplace(EdgeKey{id, d.package}, d.version);
      } else {
        g.diagnostics.push_back("dangling declaration " + id.str() + ":" + node.version.raw() + " -> " +
                                d.package.str() + ":" + d.version.raw());
      }
    }
  }

  std::map<NodeRef, std::vector<PackageId>> out;
  for (const auto& [key, v] : g.edges) out[key.first].push_back(key.second);
  std::set<PackageId> seen;
  std::deque<std::pair<NodeRef, std::size_t>> queue{{std::nullopt, 0}};
  while (!queue.empty()) {
    auto [from, depth] = queue.front();
    queue.pop_front();
    for (const auto& to : out[from]) {
      if (!seen.insert(to).second) continue;
      g.nodes.at(to).depth = depth + 1;
      queue.emplace_back(to, depth + 1);
    }
  }
  if (seen.size() != g.nodes.size()) {
    for (const auto& [id, node] : g.nodes) {
      if (!seen.count(id)) throw Error(ErrorKind::InvalidInput, "node " + id.str() + " is unreachable from the root");
    }
  }
}

DependencyGraph resolve(const std::string& root, const std::vector<DependencyDecl>& root_decls,
                        const std::map<PackageId, Version>& pins, const RegistryIndex& reg) {
  DependencyGraph g;
  g.root = root;
  g.root_declarations = root_decls;
  g.pins = pins;

  std::deque<PackageId> queue;
  auto admit = [&](const DependencyDecl& d, std::size_t depth, const std::string& declarer) {
    if (!is_graph_scope(d.scope) || g.contains(d.package)) return;
    auto pin = pins.find(d.package);
    const Version& v = pin != pins.end() ? pin->second : d.version;
    if (!reg.find(d.package, v)) {
      throw Error(ErrorKind::DanglingTarget,
                  declarer + " declares missing release " + d.package.str() + ":" + v.raw());
    }
    g.nodes.emplace(d.package, GraphNode{v, depth});
    queue.push_back(d.package);
  };

  for (const auto& d : root_decls) admit(d, 1, root);
  while (!queue.empty()) {
    const PackageId id = queue.front();
    queue.pop_front();
    const GraphNode& node = g.nodes.at(id);
    const Release& r = reg.release(id, node.version);
    const std::size_t depth = node.depth + 1;
    for (const auto& d : r.dependencies) admit(d, depth, r.coordinate());
  }
  connect(g, reg);
  return g;
}

}  // namespace

const Version& DependencyGraph::version_of(const PackageId& p) const {
  auto it = nodes.find(p);
  if (it == nodes.end()) throw Error(ErrorKind::UnknownPackage, "package " + p.str() + " is not a graph node");
  return it->second.version;
}

std::vector<PackageId> DependencyGraph::direct_dependencies() const {
  std::vector<PackageId> out;
  for (const auto& d : root_declarations) {
    if (is_graph_scope(d.scope) && contains(d.package)) out.push_back(d.package);
  }
  return out;
}

RootManifest parse_manifest(std::string_view json_text, const std::string& source) {
  const auto doc = detail::parse_json_text(json_text, source);
  const JsonCursor root(doc, source, "");
  root.expect_object({"module", "dependencies"});
  RootManifest m;
  m.module_name = root.at("module").string();
  if (m.module_name.empty()) root.at("module").fail("module name is empty", ErrorKind::InvalidInput);

  const JsonCursor deps = root.at("dependencies");
  std::set<PackageId> seen;
  for (std::size_t i = 0; i < deps.array_size(); ++i) {
    const JsonCursor dep = deps.at(i);
    dep.expect_object({"package", "version", "scope"});
    auto decl = dep.guarded([&] {
      return DependencyDecl{PackageId::parse(dep.at("package").string()), Version::parse(dep.at("version").string()),
                            parse_scope(dep.at("scope").string())};
    });
    if (!seen.insert(decl.package).second) dep.fail("duplicate dependency " + decl.package.str(), ErrorKind::InvalidInput);
    m.direct_dependencies.push_back(std::move(decl));
  }
  return m;
}

RootManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(detail::read_file(path), path.string());
}

nlohmann::json manifest_to_json(const RootManifest& manifest) {
  nlohmann::json deps = nlohmann::json::array();
  for (const auto& d : manifest.direct_dependencies) {
    deps.push_back({{"package", d.package.str()}, {"version", d.version.raw()}, {"scope", to_string(d.scope)}});
  }
  return {{"module", manifest.module_name}, {"dependencies", std::move(deps)}};
}

ResolvedTree parse_dep_tree(std::string_view text) {
  ResolvedTree tree;
  std::vector<std::ptrdiff_t> ancestors;  // ancestors[d-1] = index of the last node seen at depth d
  bool have_root = false;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.rfind("[INFO] ", 0) == 0) line.remove_prefix(7);
    if (line.find_first_not_of(' ') == std::string_view::npos) continue;

    auto fail = [&](ErrorKind kind, const std::string& what) -> Error {
      return Error(kind, "line " + std::to_string(line_no) + ": " + what);
    };

    if (!have_root) {
      const auto fields = split(line, ':');
      if (fields.size() != 4) throw fail(ErrorKind::Parse, "root coordinate must be group:artifact:packaging:version");
      if (fields[0].empty() || fields[1].empty()) throw fail(ErrorKind::Parse, "empty root group or artifact");
      tree.root = std::string(fields[0]) + ":" + std::string(fields[1]);
      have_root = true;
      continue;
    }

    int depth = 0;
    std::size_t i = 0;
    while (i + 3 <= line.size()) {
      const auto chunk = line.substr(i, 3);
      if (chunk == "|  " || chunk == "   ") {
        ++depth;
        i += 3;
        continue;
      }
      break;
    }
    const auto marker = line.substr(i, 3);
    if (marker != "+- " && marker != "\\- ") throw fail(ErrorKind::Parse, "expected '+- ' or '\\- ' branch marker");
    ++depth;
    i += 3;
    if (depth > static_cast<int>(ancestors.size()) + 1) {
      throw fail(ErrorKind::Indentation, "depth " + std::to_string(depth) + " has no parent at depth " +
                                             std::to_string(depth - 1));
    }

    const auto fields = split(line.substr(i), ':');
    if (fields.size() != 5) throw fail(ErrorKind::Parse, "coordinate must be group:artifact:packaging:version:scope");
    TreeNode node;
    try {
      node.package = PackageId::parse(std::string(fields[0]) + ":" + std::string(fields[1]));
      node.version = Version::parse(fields[3]);
      node.scope = parse_scope(fields[4]);
    } catch (const Error& e) {
      throw fail(e.kind(), e.what());
    }
    node.depth = depth;
    node.parent = depth == 1 ? -1 : ancestors[depth - 2];
    ancestors.resize(depth - 1);
    ancestors.push_back(static_cast<std::ptrdiff_t>(tree.nodes.size()));
    tree.nodes.push_back(std::move(node));
  }
  if (!have_root) throw Error(ErrorKind::Parse, "empty dependency tree");
  return tree;
}

DependencyGraph restore_edges(const ResolvedTree& tree, const RegistryIndex& reg) {
  DependencyGraph g;
  g.root = tree.root;

  std::vector<bool> valid(tree.nodes.size(), false);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    const bool parent_valid = n.parent < 0 || valid[static_cast<std::size_t>(n.parent)];
    valid[i] = parent_valid && is_graph_scope(n.scope);
    if (n.depth == 1) g.root_declarations.push_back(DependencyDecl{n.package, n.version, n.scope});
    if (!valid[i]) continue;

    if (!reg.find(n.package, n.version)) {
      throw Error(ErrorKind::UnknownRelease, "tree node " + n.package.str() + ":" + n.version.raw() +
                                                 " is not in the registry");
    }
    auto [it, inserted] = g.nodes.emplace(n.package, GraphNode{n.version, 0});
    if (!inserted && it->second.version != n.version) {
      throw Error(ErrorKind::InvalidInput, "tree resolves " + n.package.str() + " to both " +
                                               it->second.version.raw() + " and " + n.version.raw());
    }
    if (n.parent >= 0) {
      const TreeNode& parent = tree.nodes[static_cast<std::size_t>(n.parent)];
      const auto& decls = reg.release(parent.package, parent.version).dependencies;
      const bool declared = std::any_of(decls.begin(), decls.end(), [&](const DependencyDecl& d) {
        return d.package == n.package && is_graph_scope(d.scope);
      });
      if (!declared) {
        throw Error(ErrorKind::InvalidInput, "tree places " + n.package.str() + " under " + parent.package.str() + ":" +
                                                 parent.version.raw() + ", which does not declare it");
      }
    }
  }
  connect(g, reg);
  return g;
}

DependencyGraph resolve_graph(const RootManifest& manifest, const RegistryIndex& reg) {
  std::set<PackageId> seen;
  for (const auto& d : manifest.direct_dependencies) {
    if (!seen.insert(d.package).second) {
      throw Error(ErrorKind::InvalidInput, "manifest declares " + d.package.str() + " more than once");
    }
  }
  return resolve(manifest.module_name, manifest.direct_dependencies, {}, reg);
}

DependencyGraph update_graph(const DependencyGraph& g, const std::map<PackageId, Version>& upgrades,
                             const RegistryIndex& reg) {
  auto pins = g.pins;
  auto decls = g.root_declarations;
  for (const auto& [p, v] : upgrades) {
    if (!g.contains(p)) throw Error(ErrorKind::UnknownPackage, "package " + p.str() + " is not a graph node");
    reg.release(p, v);
    pins.insert_or_assign(p, v);
    for (auto& d : decls) {
      if (d.package == p) d.version = v;
    }
  }
  return resolve(g.root, decls, pins, reg);
}

DependencyGraph update_graph(const DependencyGraph& g, const PackageId& p, const Version& new_version,
                             const RegistryIndex& reg) {
  return update_graph(g, std::map<PackageId, Version>{{p, new_version}}, reg);
}

std::string render_dep_tree(const DependencyGraph& g, const RegistryIndex& reg) {
  struct Child {
    PackageId package;
    Scope scope;
  };
  std::map<NodeRef, std::vector<Child>> children;
  std::set<PackageId> placed;
  std::deque<NodeRef> queue{std::nullopt};
  while (!queue.empty()) {
    const NodeRef from = queue.front();
    queue.pop_front();
    const auto& decls = from ? reg.release(*from, g.version_of(*from)).dependencies : g.root_declarations;
    for (const auto& d : decls) {
      if (!is_graph_scope(d.scope) || !g.contains(d.package) || !placed.insert(d.package).second) continue;
      children[from].push_back(Child{d.package, d.scope});
      queue.emplace_back(d.package);
    }
  }

  std::ostringstream out;
  out << (g.root.find(':') == std::string::npos ? "project:" + g.root : g.root) << ":pom:0\n";
  std::function<void(const NodeRef&, const std::string&)> emit = [&](const NodeRef& from, const std::string& prefix) {
    const auto& kids = children[from];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      const auto& kid = kids[i];
      out << prefix << (last ? "\\- " : "+- ") << kid.package.group << ':' << kid.package.artifact << ":jar:"
          << g.version_of(kid.package).raw() << ':' << to_string(kid.scope) << '\n';
      emit(kid.package, prefix + (last ? "   " : "|  "));
    }
  };
  emit(std::nullopt, "");
  return out.str();
}

GraphMetrics graph_metrics(const DependencyGraph& g, const RegistryIndex& reg) {
  GraphMetrics m;
  m.node_count = g.nodes.size();
  for (const auto& [id, node] : g.nodes) {
    const auto lag = reg.lag(id, node.version);
    m.total_version_lag += lag.version_lag;
    m.total_time_lag_days += lag.time_lag_days;
  }
  return m;
}

}  // namespace laglift
