#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace laglift {

/// One token of a version string: a number or a lower-cased qualifier word.
using VersionSegment = std::variant<std::uint64_t, std::string>;

/// A Maven-style version identifier.
///
/// Text is split on '.', '-' and at every letter/digit boundary. Ordering
/// compares the normalized segment list: numbers numerically, qualifiers by
/// rank (alpha < beta < milestone < rc < snapshot < release < sp < other
/// words, the latter lexicographically), a number above any qualifier, and a
/// missing segment as zero or release. Trailing zero and release segments
/// are dropped before comparison, as are zeros directly preceding a
/// qualifier, so "1.0" == "1" and "1.0-alpha" == "1-alpha".
class Version {
 public:
  /// Throws Error{Parse} on empty text, whitespace or an oversized number.
  static Version parse(std::string_view text);

  const std::string& raw() const noexcept { return raw_; }
  const std::vector<VersionSegment>& segments() const noexcept { return segments_; }

  /// True iff no segment is a pre-release qualifier.
  bool is_stable() const noexcept;

  friend std::strong_ordering operator<=>(const Version& a, const Version& b) noexcept;
  friend bool operator==(const Version& a, const Version& b) noexcept {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::string raw_;
  std::vector<VersionSegment> segments_;
  std::vector<VersionSegment> canonical_;
};

inline Version parse_version(std::string_view text) { return Version::parse(text); }

inline std::strong_ordering compare_versions(const Version& a, const Version& b) noexcept {
  return a <=> b;
}

inline bool is_stable(const Version& v) noexcept { return v.is_stable(); }

/// Seconds-resolution UTC instant.
using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDThh:mm:ssZ". Only the UTC designator is accepted.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct LagMeasure {
  std::uint64_t version_lag = 0;
  std::int64_t time_lag_days = 0;

  friend bool operator==(const LagMeasure&, const LagMeasure&) = default;
};

/// Number of stable releases strictly newer than `current`.
/// Throws Error{UnknownVersion} when `current` is not among `all_releases`.
std::uint64_t version_lag(const Version& current, std::span<const Version> all_releases);

/// Whole days from `current_released_at` to `latest_released_at`, floored and
/// clamped at zero.
std::int64_t time_lag(Timestamp current_released_at, Timestamp latest_released_at) noexcept;

}  // namespace laglift
