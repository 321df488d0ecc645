#include "laglift/package.hpp"

#include "laglift/error.hpp"

namespace laglift {

PackageId PackageId::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size() ||
      text.find(':', colon + 1) != std::string_view::npos) {
    throw Error(ErrorKind::Parse, "package id '" + std::string(text) + "' is not group:artifact");
  }
  return PackageId{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

Scope parse_scope(std::string_view text) {
  if (text == "compile") return Scope::Compile;
  if (text == "runtime") return Scope::Runtime;
  if (text == "test") return Scope::Test;
  if (text == "provided") return Scope::Provided;
  throw Error(ErrorKind::Parse, "unknown scope '" + std::string(text) + "'");
}

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::Compile: return "compile";
    case Scope::Runtime: return "runtime";
    case Scope::Test: return "test";
    case Scope::Provided: return "provided";
  }
  return "compile";
}

std::string to_string(const NodeRef& node) { return node ? node->str() : std::string("<root>"); }

}  // namespace laglift
