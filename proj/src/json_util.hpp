#pragma once

// Strict accessors for the input documents: unknown keys and wrong types are
// errors that name the source file and the JSON location.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "laglift/error.hpp"

namespace laglift::detail {

using nlohmann::json;

class JsonCursor {
 public:
  JsonCursor(const json& node, std::string source, std::string where)
      : node_(node), source_(std::move(source)), where_(std::move(where)) {}

  const json& node() const { return node_; }
  const std::string& where() const { return where_; }

  [[noreturn]] void fail(const std::string& message, ErrorKind kind = ErrorKind::Parse) const {
    throw Error(kind, source_ + ": " + (where_.empty() ? std::string("<document>") : where_) + ": " + message);
  }

  void expect_object(std::initializer_list<std::string_view> required,
                     std::initializer_list<std::string_view> optional = {}) const {
    if (!node_.is_object()) fail("expected an object");
    for (const auto& [key, value] : node_.items()) {
      bool known = false;
      for (auto k : required) known = known || key == k;
      for (auto k : optional) known = known || key == k;
      if (!known) fail("unknown key '" + key + "'");
    }
    for (auto k : required) {
      if (!node_.contains(std::string(k))) fail("missing key '" + std::string(k) + "'");
    }
  }

  JsonCursor at(std::string_view key) const {
    return JsonCursor(node_.at(std::string(key)), source_, join(std::string(key)));
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  JsonCursor at(std::size_t index) const {
    return JsonCursor(node_.at(index), source_, where_ + "[" + std::to_string(index) + "]");
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  std::size_t array_size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  /// Runs `f`, rethrowing any library error with this cursor's location.
  template <typename F>
  auto guarded(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (std::string_view(e.what()).rfind(source_ + ":", 0) == 0) throw;
      fail(e.what(), e.kind());
    }
  }

 private:
  std::string join(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  const json& node_;
  std::string source_;
  std::string where_;
};

json parse_json_text(std::string_view text, const std::string& source);
std::string read_file(const std::filesystem::path& path);

}  // namespace laglift::detail
