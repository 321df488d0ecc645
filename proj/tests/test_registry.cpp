#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "laglift/error.hpp"
#include "laglift/registry.hpp"
#include "support/fixtures.hpp"

using namespace laglift;
using namespace laglift::testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Invariant;
}

const char* kThreePackages = R"json({
  "packages": [
    {"group": "g", "artifact": "a", "releases": [
      {"version": "1.0", "released_at": "2020-01-01T00:00:00Z", "api": [],
       "dependencies": [{"package": "g:b", "version": "1.0", "scope": "compile"}]}]},
    {"group": "g", "artifact": "b", "releases": [
      {"version": "1.0", "released_at": "2020-01-02T00:00:00Z", "api": [],
       "dependencies": [{"package": "g:c", "version": "2.0", "scope": "runtime"}]}]},
    {"group": "g", "artifact": "c", "releases": [
      {"version": "2.0", "released_at": "2020-01-03T00:00:00Z", "dependencies": [],
       "api": [{"id": "com.c.C#run()", "kind": "method", "fingerprint": "0a1b2c3d"}]}]}
  ]
})json";

}  // namespace

TEST_CASE("parse_registry loads a three-package fixture") {
  const auto reg = parse_registry(kThreePackages);
  CHECK(reg.package_count() == 3);
  CHECK(reg.release(pid("g:c"), ver("2.0")).api.entries.size() == 1);
  CHECK(reg.release(pid("g:b"), ver("1.0")).dependencies.front().scope == Scope::Runtime);
}

TEST_CASE("registry JSON round trip") {
  const auto reg = parse_registry(kThreePackages);
  const auto again = registry_from_json(registry_to_json(reg));
  CHECK(registry_to_json(again) == registry_to_json(reg));
}

TEST_CASE("load_registry reports a missing file") {
  CHECK(kind_of([] { load_registry("/nonexistent/registry.json"); }) == ErrorKind::MissingFile);
}

TEST_CASE("load_registry reads from disk") {
  const auto path = std::filesystem::temp_directory_path() / "laglift_test_registry.json";
  std::ofstream(path) << kThreePackages;
  CHECK(load_registry(path).package_count() == 3);
  std::filesystem::remove(path);
}

TEST_CASE("closed-world violations name the missing release") {
  RegistryBuilder b;
  b.add("g:A", "1.0", {dep("g:B", "9.9")}).add("g:B", "1.0");
  try {
    b.build();
    FAIL("expected dangling target");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DanglingTarget);
    CHECK(std::string(e.what()).find("g:B:9.9") != std::string::npos);
  }
}

TEST_CASE("duplicate releases are rejected, including equal-comparing spellings") {
  CHECK(kind_of([] { RegistryBuilder().add("g:A", "1.0").add("g:A", "1.0").build(); }) ==
        ErrorKind::DuplicateRelease);
  CHECK(kind_of([] { RegistryBuilder().add("g:A", "1.0").add("g:A", "1.0.0").build(); }) ==
        ErrorKind::DuplicateRelease);
}

TEST_CASE("self-dependency and malformed documents are rejected") {
  CHECK(kind_of([] { RegistryBuilder().add("g:A", "1.0", {dep("g:A", "1.0")}).build(); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_registry("{"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_registry(R"json({"packages": [], "extra": 1})json"); }) == ErrorKind::Parse);
  CHECK(kind_of([] {
          parse_registry(R"json({"packages": [{"group": "g", "artifact": "a", "releases": [
            {"version": "1.0", "released_at": "2020-01-01", "dependencies": [], "api": []}]}]})json");
        }) == ErrorKind::Parse);
}

TEST_CASE("releases_of is ascending regardless of input order") {
  const auto reg = RegistryBuilder().add("g:A", "2.0").add("g:A", "1.0").add("g:A", "1.1").build();
  std::vector<std::string> raw;
  for (const auto& r : reg.releases_of(pid("g:A"))) raw.push_back(r.version.raw());
  CHECK(raw == std::vector<std::string>{"1.0", "1.1", "2.0"});
  CHECK(kind_of([&] { reg.releases_of(pid("g:Z")); }) == ErrorKind::UnknownPackage);
  CHECK(kind_of([&] { reg.release(pid("g:A"), ver("3.0")); }) == ErrorKind::UnknownRelease);
}

TEST_CASE("latest_stable skips pre-releases") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0")
                       .add("g:A", "2.0-rc1")
                       .add("g:B", "1.0")
                       .add("g:C", "2.0-beta")
                       .build();
  CHECK(reg.latest_stable(pid("g:A")).raw() == "1.0");
  CHECK(latest_stable(reg, pid("g:B")).raw() == "1.0");
  CHECK(kind_of([&] { reg.latest_stable(pid("g:C")); }) == ErrorKind::NoStableRelease);
}

TEST_CASE("closure_size examples") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {dep("g:B", "1.0")})
                       .add("g:B", "1.0", {dep("g:C", "1.0")})
                       .add("g:C", "1.0")
                       .add("g:T", "1.0", {dep("g:B", "1.0", Scope::Test)})
                       .build();
  CHECK(closure_size(reg, pid("g:A"), ver("1.0")) == 2);
  CHECK(closure_size(reg, pid("g:C"), ver("1.0")) == 0);
  CHECK(closure_size(reg, pid("g:T"), ver("1.0")) == 0);
}

TEST_CASE("closure_size mediates like a standalone resolution") {
  // A:1.0 reaches C twice; nearest wins, and C:2.0 pulls in D which C:1.0 does not.
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {dep("g:B", "1.0"), dep("g:C", "1.0")})
                       .add("g:B", "1.0", {dep("g:C", "2.0")})
                       .add("g:C", "1.0")
                       .add("g:C", "2.0", {dep("g:D", "1.0")})
                       .add("g:D", "1.0")
                       .build();
  CHECK(reg.closure_size(pid("g:A"), ver("1.0")) == 2);
  CHECK(reg.closure_size(pid("g:C"), ver("2.0")) == 1);
}

TEST_CASE("closure_size agrees with resolve_graph on random registries") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    RegistryBuilder b;
    const int n = 2 + static_cast<int>(rng() % 7);
    auto name = [](int i) { return "g:p" + std::to_string(i); };
    for (int i = n - 1; i >= 0; --i) {
      for (int v = 1; v <= 3; ++v) {
        std::vector<DependencyDecl> deps;
        for (int j = i + 1; j < n; ++j) {
          if (rng() % 3 == 0) {
            const Scope s = rng() % 5 == 0 ? Scope::Test : Scope::Compile;
            deps.push_back(dep(name(j), std::to_string(1 + rng() % 3) + ".0", s));
          }
        }
        b.add(name(i), std::to_string(v) + ".0", deps);
      }
    }
    const auto reg = b.build();
    for (const auto& [p, releases] : reg.packages()) {
      for (const auto& r : releases) {
        const auto solo = resolve_graph(manifest({DependencyDecl{p, r.version, Scope::Compile}}), reg);
        CHECK(reg.closure_size(p, r.version) == solo.nodes.size() - 1);
        CHECK(reg.closure_size(p, r.version) == reg.closure_size(p, r.version));
        CHECK(reg.closure_size(p, r.version) <= reg.package_count() - 1);
      }
    }
  }
}

TEST_CASE("lag combines version and time lag") {
  const auto reg = RegistryBuilder()
                       .add("g:A", "1.0", {}, {}, "2020-01-01T00:00:00Z")
                       .add("g:A", "1.1", {}, {}, "2020-01-11T00:00:00Z")
                       .add("g:A", "2.0-rc1", {}, {}, "2020-02-01T00:00:00Z")
                       .build();
  CHECK(reg.lag(pid("g:A"), ver("1.0")).version_lag == 1);
  CHECK(reg.lag(pid("g:A"), ver("1.0")).time_lag_days == 10);
  CHECK(reg.lag(pid("g:A"), ver("1.1")).time_lag_days == 0);
  // A pre-release newer than the latest stable carries no lag in either measure.
  CHECK(reg.lag(pid("g:A"), ver("2.0-rc1")).version_lag == 0);
  CHECK(reg.lag(pid("g:A"), ver("2.0-rc1")).time_lag_days == 0);
}
