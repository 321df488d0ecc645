#include "laglift/version.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "laglift/error.hpp"

namespace laglift {

namespace {

constexpr std::array<std::string_view, 5> kPreRelease = {"alpha", "beta", "milestone", "rc", "snapshot"};

// Rank of known qualifiers; the release marker "" sits between snapshot and sp.
constexpr int kReleaseRank = 5;
constexpr int kUnknownRank = 7;

int qualifier_rank(std::string_view q) {
  for (std::size_t i = 0; i < kPreRelease.size(); ++i) {
    if (q == kPreRelease[i]) return static_cast<int>(i);
  }
  if (q.empty()) return kReleaseRank;
  if (q == "sp") return 6;
  return kUnknownRank;
}

std::string normalize_qualifier(std::string q) {
  if (q == "ga" || q == "final" || q == "release") return {};
  return q;
}

bool is_null_like(const VersionSegment& s) {
  if (const auto* n = std::get_if<std::uint64_t>(&s)) return *n == 0;
  return std::get<std::string>(s).empty();
}

int compare_qualifiers(const std::string& a, const std::string& b) {
  const int ra = qualifier_rank(a);
  const int rb = qualifier_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == kUnknownRank && a != b) return a < b ? -1 : 1;
  return 0;
}

int compare_items(const VersionSegment& a, const VersionSegment& b) {
  const auto* na = std::get_if<std::uint64_t>(&a);
  const auto* nb = std::get_if<std::uint64_t>(&b);
  if (na && nb) return *na == *nb ? 0 : (*na < *nb ? -1 : 1);
  if (na) return 1;
  if (nb) return -1;
  return compare_qualifiers(std::get<std::string>(a), std::get<std::string>(b));
}

// A segment against a position the other version does not have.
int compare_with_missing(const VersionSegment& a) {
  if (const auto* n = std::get_if<std::uint64_t>(&a)) return *n == 0 ? 0 : 1;
  return compare_qualifiers(std::get<std::string>(a), std::string{});
}

}  // namespace

Version Version::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::Parse, "empty version string");

  Version v;
  v.raw_ = std::string(text);

  std::string token;
  bool token_numeric = false;
  auto flush = [&](bool at_separator) {
    if (token.empty()) {
      // "1..2" and "1.-2" carry an implicit zero, as in Maven.
      if (at_separator) v.segments_.emplace_back(std::uint64_t{0});
      return;
    }
    if (token_numeric) {
      std::uint64_t n = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw Error(ErrorKind::Parse, "numeric segment out of range in version '" + v.raw_ + "'");
      }
      v.segments_.emplace_back(n);
    } else {
      v.segments_.emplace_back(token);
    }
    token.clear();
  };

  for (const char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) throw Error(ErrorKind::Parse, "whitespace in version '" + v.raw_ + "'");
    if (c == '.' || c == '-') {
      flush(true);
      continue;
    }
    const bool digit = std::isdigit(uc) != 0;
    if (!token.empty() && digit != token_numeric) flush(false);
    token_numeric = digit;
    token.push_back(static_cast<char>(std::tolower(uc)));
  }
  if (!token.empty()) flush(false);
  else if (text.back() == '.' || text.back() == '-') flush(true);

  for (const auto& seg : v.segments_) {
    VersionSegment item = seg;
    if (auto* q = std::get_if<std::string>(&item)) {
      *q = normalize_qualifier(*q);
      while (!v.canonical_.empty() && is_null_like(v.canonical_.back())) v.canonical_.pop_back();
    }
    v.canonical_.push_back(std::move(item));
  }
  while (!v.canonical_.empty() && is_null_like(v.canonical_.back())) v.canonical_.pop_back();
  return v;
}

bool Version::is_stable() const noexcept {
  return std::none_of(segments_.begin(), segments_.end(), [](const VersionSegment& s) {
    const auto* q = std::get_if<std::string>(&s);
    return q && std::find(kPreRelease.begin(), kPreRelease.end(), *q) != kPreRelease.end();
  });
}

std::strong_ordering operator<=>(const Version& a, const Version& b) noexcept {
  const auto& x = a.canonical_;
  const auto& y = b.canonical_;
  const std::size_t n = std::max(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = 0;
    if (i < x.size() && i < y.size()) c = compare_items(x[i], y[i]);
    else if (i < x.size()) c = compare_with_missing(x[i]);
    else c = -compare_with_missing(y[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Timestamp parse_timestamp(std::string_view text) {
  auto fail = [&]() -> Error {
    return Error(ErrorKind::Parse, "timestamp '" + std::string(text) + "' is not YYYY-MM-DDThh:mm:ssZ");
  };
  // 2020-01-31T12:00:00Z
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    throw fail();
  }
  auto field = [&](std::size_t pos, std::size_t len) {
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw fail();
      value = value * 10 + (text[i] - '0');
    }
    return value;
  };
  using namespace std::chrono;
  const year_month_day date{year{field(0, 4)}, month{static_cast<unsigned>(field(5, 2))},
                            day{static_cast<unsigned>(field(8, 2))}};
  const int hh = field(11, 2), mm = field(14, 2), ss = field(17, 2);
  if (!date.ok() || hh > 23 || mm > 59 || ss > 59) throw fail();
  return sys_days{date} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto days_part = floor<days>(ts);
  const year_month_day date{days_part};
  const hh_mm_ss time{ts - days_part};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                static_cast<int>(time.hours().count()), static_cast<int>(time.minutes().count()),
                static_cast<int>(time.seconds().count()));
  return buf;
}

std::uint64_t version_lag(const Version& current, std::span<const Version> all_releases) {
  if (std::find(all_releases.begin(), all_releases.end(), current) == all_releases.end()) {
    throw Error(ErrorKind::UnknownVersion, "version " + current.raw() + " is not a known release");
  }
  return static_cast<std::uint64_t>(std::count_if(all_releases.begin(), all_releases.end(),
                                                  [&](const Version& r) { return r.is_stable() && current < r; }));
}

std::int64_t time_lag(Timestamp current_released_at, Timestamp latest_released_at) noexcept {
  using namespace std::chrono;
  if (latest_released_at <= current_released_at) return 0;
  return floor<days>(latest_released_at - current_released_at).count();
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::MissingFile: return "missing file";
    case ErrorKind::DanglingTarget: return "dangling dependency target";
    case ErrorKind::DuplicateRelease: return "duplicate release";
    case ErrorKind::UnknownPackage: return "unknown package";
    case ErrorKind::UnknownRelease: return "unknown release";
    case ErrorKind::UnknownVersion: return "unknown version";
    case ErrorKind::NoStableRelease: return "no stable release";
    case ErrorKind::Indentation: return "indentation error";
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::PackageMismatch: return "package mismatch";
    case ErrorKind::Invariant: return "invariant violation";
  }
  return "error";
}

}  // namespace laglift
