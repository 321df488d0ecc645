#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "laglift/error.hpp"
#include "laglift/harness.hpp"
#include "laglift/oracle.hpp"
#include "support/fixtures.hpp"

using namespace laglift;
using namespace laglift::testing;

namespace {

std::string serialize(const Ecosystem& eco) {
  return dump_json(registry_to_json(eco.registry)) + dump_json(manifest_to_json(eco.manifest)) +
         dump_json(usage_to_json(eco.usage));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gen_ecosystem is a pure function of its parameters") {
  const EcosystemParams params{.seed = 1};
  CHECK(serialize(gen_ecosystem(params)) == serialize(gen_ecosystem(params)));
  CHECK(serialize(gen_ecosystem(params)) != serialize(gen_ecosystem(EcosystemParams{.seed = 2})));
}

TEST_CASE("generated ecosystems respect their parameters") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const EcosystemParams params{.seed = seed, .package_count = 1 + static_cast<int>(seed % 10),
                                 .max_versions = 1 + static_cast<int>(seed % 6)};
    const auto eco = gen_ecosystem(params);
    CHECK(eco.registry.package_count() <= static_cast<std::size_t>(params.package_count));
    for (const auto& [p, releases] : eco.registry.packages()) {
      CHECK(releases.size() <= static_cast<std::size_t>(params.max_versions));
      for (std::size_t i = 1; i < releases.size(); ++i) CHECK(releases[i - 1].released_at < releases[i].released_at);
      for (const auto& r : releases) CHECK(r.dependencies.size() <= static_cast<std::size_t>(params.max_deps_per_release));
    }
    validate_usage(eco.usage);
    CHECK_NOTHROW(resolve_graph(eco.manifest, eco.registry));
  }
}

TEST_CASE("validate_params rejects out-of-range values") {
  CHECK_THROWS_AS(validate_params(EcosystemParams{.package_count = 0}), Error);
  CHECK_THROWS_AS(validate_params(EcosystemParams{.breaking_probability = 1.5}), Error);
  CHECK_THROWS_AS(validate_params(EcosystemParams{.usage_density = -0.1}), Error);
  CHECK_THROWS_AS(validate_params(EcosystemParams{.max_versions = 0}), Error);
  CHECK_NOTHROW(validate_params(EcosystemParams{}));
}

TEST_CASE("without breaking changes every candidate is compatible") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto eco = gen_ecosystem(EcosystemParams{.seed = seed, .breaking_probability = 0.0});
    const auto plan = plan_upgrades(resolve_graph(eco.manifest, eco.registry), eco.registry, eco.usage);
    for (const auto& d : plan.decisions) {
      for (const auto& r : d.rejected) CHECK(r.reason != RejectReason::Incompatible);
    }
  }
}

TEST_CASE("a single package with a single release yields no upgrades") {
  const auto eco = gen_ecosystem(EcosystemParams{.seed = 4, .package_count = 1, .max_versions = 1});
  const auto plan = plan_upgrades(resolve_graph(eco.manifest, eco.registry), eco.registry, eco.usage);
  for (const auto& d : plan.decisions) CHECK(d.outcome != Outcome::Upgraded);
}

TEST_CASE("oracle accepts generated plans of both modes") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    const auto eco = gen_ecosystem(EcosystemParams{.seed = seed, .package_count = 1 + static_cast<int>(seed % 10),
                                                   .max_versions = 1 + static_cast<int>(seed % 6)});
    const auto g = resolve_graph(eco.manifest, eco.registry);
    const auto v1 = oracle_verify_plan(plan_upgrades(g, eco.registry, eco.usage), g, eco.registry, eco.usage);
    CHECK_MESSAGE(v1.pass, (v1.failures.empty() ? "" : v1.failures.front()));
    const auto v2 = oracle_verify_plan(baseline_direct_latest(g, eco.registry), g, eco.registry, eco.usage);
    CHECK_MESSAGE(v2.pass, (v2.failures.empty() ? "" : v2.failures.front()));
  }
}

TEST_CASE("oracle rejects a plan whose target was lowered") {
  int mutated = 0;
  for (std::uint64_t seed = 1; seed <= 100 && mutated < 10; ++seed) {
    const auto eco = gen_ecosystem(EcosystemParams{.seed = seed});
    const auto g = resolve_graph(eco.manifest, eco.registry);
    const auto plan = plan_upgrades(g, eco.registry, eco.usage);
    for (std::size_t i = 0; i < plan.decisions.size(); ++i) {
      const auto& d = plan.decisions[i];
      if (d.outcome != Outcome::Upgraded) continue;
      const auto cands = candidate_versions(eco.registry, d.package, d.from);
      if (cands.size() < 2 || cands.front() == d.to) continue;
      UpgradePlan edited = plan;
      edited.decisions[i].to = cands.front();
      const auto verdict = oracle_verify_plan(edited, g, eco.registry, eco.usage);
      CHECK_FALSE(verdict.pass);
      REQUIRE_FALSE(verdict.failures.empty());
      CHECK(verdict.failures.front().find(d.package.str()) != std::string::npos);
      ++mutated;
      break;
    }
  }
  CHECK(mutated > 0);
}

TEST_CASE("oracle flags other tampering") {
  const auto eco = gen_ecosystem(EcosystemParams{.seed = 9});
  const auto g = resolve_graph(eco.manifest, eco.registry);
  const auto plan = plan_upgrades(g, eco.registry, eco.usage);
  REQUIRE_FALSE(plan.decisions.empty());

  UpgradePlan truncated = plan;
  truncated.decisions.pop_back();
  CHECK_FALSE(oracle_verify_plan(truncated, g, eco.registry, eco.usage).pass);

  UpgradePlan wrong_metrics = plan;
  wrong_metrics.metrics_after.total_version_lag += 1;
  CHECK_FALSE(oracle_verify_plan(wrong_metrics, g, eco.registry, eco.usage).pass);
}

TEST_CASE("oracle accepts the empty plan of a root-only graph") {
  const auto reg = RegistryBuilder().add("g:A", "1.0").build();
  const auto g = resolve_graph(manifest({}), reg);
  const auto plan = plan_upgrades(g, reg, usage({}));
  CHECK(plan.decisions.empty());
  CHECK(oracle_verify_plan(plan, g, reg, usage({})).pass);
}

TEST_CASE("breaking_violations counts reachable breaks against the original release") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {}, api({{"method:A#f()", "aaaaaaaa"}}))
                       .add("g:A", "2.0", {}, {})
                       .build();
  const auto g = resolve_graph(manifest({dep("g:A", "1.0")}), reg);
  const auto u = usage({{"method:A#f()", "g:A"}});
  CHECK(breaking_violations(baseline_direct_latest(g, reg), g, reg, u) == std::vector<PackageId>{pid("g:A")});
  CHECK(breaking_violations(plan_upgrades(g, reg, u), g, reg, u).empty());
}

TEST_CASE("compare_modes: transitive lag favours lagease") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {dep("g:C", "1.0")})
                       .add("g:C", "1.0")
                       .add("g:C", "1.1")
                       .add("g:C", "1.2")
                       .build();
  const auto g = resolve_graph(manifest({dep("g:A", "1.0")}), reg);
  const auto report = compare_modes(g, reg, usage({}));
  CHECK(report.lagease.original_version_lag == 2);
  CHECK(report.lagease.reduced_version_lag == 2);
  CHECK(report.direct_latest.reduced_version_lag == 0);
  CHECK(report.lagease.reduced_version_lag >= report.direct_latest.reduced_version_lag);
}

TEST_CASE("compare_modes: nothing to do") {
  const auto reg = RegistryBuilder().add("g:A", "1.0").build();
  const auto report = compare_modes(resolve_graph(manifest({dep("g:A", "1.0")}), reg), reg, usage({}));
  for (const auto& row : {report.lagease, report.direct_latest}) {
    CHECK(row.reduced_version_lag == 0);
    CHECK(row.dep_count_delta == 0);
    CHECK(row.breaking_violations == 0);
  }
}

TEST_CASE("compare_modes: a reachable break in the latest release") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {}, api({{"method:A#f()", "aaaaaaaa"}}))
                       .add("g:A", "1.1", {}, api({{"method:A#f()", "aaaaaaaa"}}))
                       .add("g:A", "2.0", {}, api({{"method:A#f()", "bbbbbbbb"}}))
                       .build();
  const auto g = resolve_graph(manifest({dep("g:A", "1.0")}), reg);
  const auto report = compare_modes(g, reg, usage({{"method:A#f()", "g:A"}}));
  CHECK(report.direct_latest.breaking_violations >= 1);
  CHECK(report.lagease.breaking_violations == 0);
  CHECK(report.lagease.reduced_version_lag == 1);
  const auto doc = comparison_to_json(report);
  CHECK(doc.at("rows").size() == 2);
  CHECK(comparison_to_text(report).find("direct-latest") != std::string::npos);
}

TEST_CASE("write_bundle writes the three documents") {
  const auto dir = std::filesystem::temp_directory_path() / "laglift_bundle_test";
  std::filesystem::remove_all(dir);
  const auto eco = gen_ecosystem(EcosystemParams{.seed = 7});
  write_bundle(eco, dir);
  CHECK(slurp(dir / "registry.json") == dump_json(registry_to_json(eco.registry)));
  CHECK(registry_to_json(load_registry(dir / "registry.json")) == registry_to_json(eco.registry));
  CHECK(manifest_to_json(load_manifest(dir / "manifest.json")) == manifest_to_json(eco.manifest));
  CHECK(usage_to_json(load_usage(dir / "usage.json")) == usage_to_json(eco.usage));
  std::filesystem::remove_all(dir);
}
