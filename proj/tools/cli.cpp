#include "cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "laglift/compat.hpp"
#include "laglift/error.hpp"
#include "laglift/graph.hpp"
#include "laglift/harness.hpp"
#include "laglift/oracle.hpp"
#include "laglift/planner.hpp"
#include "laglift/registry.hpp"

namespace laglift::cli {

namespace {

enum class Format { Json, Text };

struct Config {
  std::string registry_path;
  std::string manifest_path;
  std::string tree_path;
  std::string usage_path;
  std::string output_path;
  std::string plan_path;
  std::string format_name = "json";
  Format format = Format::Json;
  EcosystemParams params;
};

struct Inputs {
  RegistryIndex registry;
  DependencyGraph graph;
  std::optional<UsageModel> usage;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Every input file is read and validated before anything is written.
Inputs load_inputs(const Config& cfg, bool need_usage) {
  if (cfg.manifest_path.empty() == cfg.tree_path.empty()) {
    throw Error(ErrorKind::InvalidInput, "exactly one of --manifest or --tree is required");
  }
  if (need_usage && cfg.usage_path.empty()) throw Error(ErrorKind::InvalidInput, "--usage is required");

  Inputs in;
  in.registry = load_registry(cfg.registry_path);
  if (!cfg.manifest_path.empty()) {
    in.graph = resolve_graph(load_manifest(cfg.manifest_path), in.registry);
  } else {
    const std::string text = read_text(cfg.tree_path);
    try {
      in.graph = restore_edges(parse_dep_tree(text), in.registry);
    } catch (const Error& e) {
      throw Error(e.kind(), cfg.tree_path + ": " + e.what());
    }
  }
  if (!cfg.usage_path.empty()) in.usage = load_usage(cfg.usage_path);
  return in;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidInput, cfg.output_path + ": cannot write file");
  file << text;
}

std::string render_plan(const UpgradePlan& plan, Format format) {
  return format == Format::Json ? dump_json(plan_to_json(plan)) : plan_to_text(plan);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Plans dependency upgrades that reduce technical lag without breaking the project", "laglift"};
  app.require_subcommand(1);

  auto add_graph_inputs = [&](CLI::App* sub) {
    sub->add_option("--registry", cfg.registry_path, "Registry snapshot (JSON)")->required();
    auto* manifest = sub->add_option("--manifest", cfg.manifest_path, "Root manifest (JSON)");
    auto* tree = sub->add_option("--tree", cfg.tree_path, "Dependency-tree dump (text)");
    manifest->excludes(tree);
    sub->add_option("--output", cfg.output_path, "Write the report here instead of standard output");
    sub->add_option("--format", cfg.format_name, "Report format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  auto* plan = app.add_subcommand("plan", "Plan upgrades: filter by debloat and compatibility, pick the latest");
  add_graph_inputs(plan);
  plan->add_option("--usage", cfg.usage_path, "Project usage model (JSON)")->required();

  auto* baseline = app.add_subcommand("baseline", "Upgrade direct dependencies to their latest stable release");
  add_graph_inputs(baseline);
  baseline->add_option("--usage", cfg.usage_path, "Project usage model (JSON); validated, not used");

  auto* report = app.add_subcommand("report", "Print technical-lag metrics of the resolved graph");
  add_graph_inputs(report);

  auto* verify = app.add_subcommand("verify", "Check a saved plan against an independent replay");
  add_graph_inputs(verify);
  verify->add_option("--usage", cfg.usage_path, "Project usage model (JSON)")->required();
  verify->add_option("plan", cfg.plan_path, "Saved plan (JSON)")->required();

  auto* gen = app.add_subcommand("gen", "Generate a synthetic fixture bundle");
  gen->add_option("--seed", cfg.params.seed, "Generator seed");
  gen->add_option("--packages", cfg.params.package_count, "Number of packages");
  gen->add_option("--max-versions", cfg.params.max_versions, "Maximum releases per package");
  gen->add_option("--breaking-prob", cfg.params.breaking_probability, "Per-construct breaking probability");
  gen->add_option("--usage-density", cfg.params.usage_density, "Fraction of constructs the project uses");
  gen->add_option("--output", cfg.output_path, "Directory for registry.json, manifest.json and usage.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "laglift: " << e.what() << "\n" << app.help();
    return 1;
  }

  cfg.format = cfg.format_name == "text" ? Format::Text : Format::Json;
  try {
    std::string text;
    if (plan->parsed()) {
      const auto in = load_inputs(cfg, true);
      text = render_plan(plan_upgrades(in.graph, in.registry, *in.usage), cfg.format);
    } else if (baseline->parsed()) {
      const auto in = load_inputs(cfg, false);
      text = render_plan(baseline_direct_latest(in.graph, in.registry), cfg.format);
    } else if (report->parsed()) {
      const auto in = load_inputs(cfg, false);
      const auto metrics = graph_metrics(in.graph, in.registry);
      text = cfg.format == Format::Json ? dump_json(metrics_to_json(metrics)) : metrics_to_text(metrics);
    } else if (verify->parsed()) {
      const auto in = load_inputs(cfg, true);
      const auto saved = parse_plan(read_text(cfg.plan_path), cfg.plan_path);
      const auto verdict = oracle_verify_plan(saved, in.graph, in.registry, *in.usage);
      if (!verdict.pass) {
        for (const auto& f : verdict.failures) err << "laglift: verify: " << f << "\n";
        return 1;
      }
      text = cfg.format == Format::Json
                 ? dump_json({{"pass", true}, {"decisions", saved.decisions.size()}})
                 : "pass: " + std::to_string(saved.decisions.size()) + " decisions confirmed\n";
    } else if (gen->parsed()) {
      const auto eco = gen_ecosystem(cfg.params);
      if (!cfg.output_path.empty()) {
        write_bundle(eco, cfg.output_path);
        return 0;
      }
      out << dump_json({{"registry", registry_to_json(eco.registry)},
                        {"manifest", manifest_to_json(eco.manifest)},
                        {"usage", usage_to_json(eco.usage)}});
      return 0;
    }
    emit(cfg, text, out);
    return 0;
  } catch (const Error& e) {
    err << "laglift: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::Invariant ? 2 : 1;
  } catch (const std::exception& e) {
    err << "laglift: internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace laglift::cli
