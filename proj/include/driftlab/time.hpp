#ifndef DRIFTLAB_TIME_HPP
#define DRIFTLAB_TIME_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace driftlab {

/// UTC calendar month. Months are always computed in UTC so partitions are
/// identical across machines and locales.
struct MonthKey {
  int year = 1970;
  int month = 1;  // 1..12

  auto operator<=>(const MonthKey&) const = default;

  /// Months since year 0, convenient as an ordinal and for seed derivation.
  std::int64_t index() const noexcept {
    return static_cast<std::int64_t>(year) * 12 + (month - 1);
  }

  /// "2017-01" style label used in reports.
  std::string label() const;
};

/// UTC calendar month containing the given Unix timestamp (seconds).
MonthKey month_of(std::int64_t timestamp);

/// Unix timestamp for a UTC civil date/time.
std::int64_t timestamp_from_civil(int year, int month, int day, int hour = 0,
                                  int minute = 0, int second = 0);

/// Parses either an RFC 3339 date-time ("2017-08-01T00:00:00Z", offset and
/// fractional seconds accepted, fraction truncated) or a plain Unix epoch
/// number. Returns nullopt on anything else.
std::optional<std::int64_t> parse_timestamp(std::string_view text);

/// "2017-08-01T00:00:00Z"
std::string format_rfc3339(std::int64_t timestamp);

}  // namespace driftlab

#endif  // DRIFTLAB_TIME_HPP
