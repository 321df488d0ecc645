#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace laglift {

enum class ErrorKind {
  Parse,            // malformed version, coordinate, timestamp or document
  MissingFile,
  DanglingTarget,   // closed-world violation in the registry
  DuplicateRelease,
  UnknownPackage,
  UnknownRelease,
  UnknownVersion,   // version absent from a release list
  NoStableRelease,
  Indentation,      // dependency-tree layout error
  InvalidInput,     // well-formed but violates a documented constraint
  PackageMismatch,
  Invariant,        // internal invariant violation
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` lets callers distinguish
/// input problems from internal invariant violations.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace laglift
