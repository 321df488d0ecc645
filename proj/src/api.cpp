#include "laglift/api.hpp"

#include "laglift/error.hpp"

namespace laglift {

ConstructKind parse_construct_kind(std::string_view text) {
  if (text == "class") return ConstructKind::Class;
  if (text == "method") return ConstructKind::Method;
  if (text == "field") return ConstructKind::Field;
  throw Error(ErrorKind::Parse, "unknown construct kind '" + std::string(text) + "'");
}

std::string_view to_string(ConstructKind kind) {
  switch (kind) {
    case ConstructKind::Class: return "class";
    case ConstructKind::Method: return "method";
    case ConstructKind::Field: return "field";
  }
  return "class";
}

ConstructId ConstructId::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size()) {
    throw Error(ErrorKind::Parse, "construct '" + std::string(text) + "' is not kind:signature");
  }
  return ConstructId{parse_construct_kind(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

std::string ConstructId::str() const { return std::string(to_string(kind)) + ":" + signature; }

bool is_fingerprint(std::string_view text) {
  if (text.size() != 8) return false;
  for (const char c : text) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::set<ConstructId> BreakingSet::all() const {
  std::set<ConstructId> out = removed;
  out.insert(changed.begin(), changed.end());
  return out;
}

BreakingSet breaking_changes(const ApiSurface& old_api, const ApiSurface& new_api) {
  BreakingSet out;
  for (const auto& [id, fingerprint] : old_api.entries) {
    auto it = new_api.entries.find(id);
    if (it == new_api.entries.end()) out.removed.insert(id);
    else if (it->second != fingerprint) out.changed.insert(id);
  }
  return out;
}

}  // namespace laglift
