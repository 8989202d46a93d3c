#include "driftlab/time.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace driftlab {

namespace {

namespace chr = std::chrono;

bool all_of_number(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
          c == '.' || c == 'e' || c == 'E'))
      return false;
  }
  return true;
}

// Parses exactly `width` decimal digits starting at pos; advances pos.
bool take_digits(std::string_view s, std::size_t& pos, int width, int& out) {
  if (pos + width > s.size()) return false;
  int value = 0;
  for (int i = 0; i < width; ++i) {
    char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + (c - '0');
  }
  pos += width;
  out = value;
  return true;
}

}  // namespace

std::string MonthKey::label() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

MonthKey month_of(std::int64_t timestamp) {
  const chr::sys_seconds tp{chr::seconds{timestamp}};
  const chr::year_month_day ymd{chr::floor<chr::days>(tp)};
  return MonthKey{static_cast<int>(ymd.year()),
                  static_cast<int>(static_cast<unsigned>(ymd.month()))};
}

std::int64_t timestamp_from_civil(int year, int month, int day, int hour,
                                  int minute, int second) {
  const chr::sys_days date = chr::year{year} / month / day;
  const auto tp = chr::sys_seconds{date} + chr::hours{hour} +
                  chr::minutes{minute} + chr::seconds{second};
  return tp.time_since_epoch().count();
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  // Plain epoch number (integer or fractional; truncated to seconds).
  if (all_of_number(text)) {
    double value = 0.0;
    const auto res =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return static_cast<std::int64_t>(std::floor(value));
  }

  // RFC 3339: YYYY-MM-DD[T ]hh:mm:ss[.frac][Z|+hh:mm|-hh:mm]
  std::size_t pos = 0;
  int year, month, day, hour, minute, second;
  if (!take_digits(text, pos, 4, year)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!take_digits(text, pos, 2, month)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!take_digits(text, pos, 2, day)) return std::nullopt;
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' '))
    return std::nullopt;
  ++pos;
  if (!take_digits(text, pos, 2, hour)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!take_digits(text, pos, 2, minute)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!take_digits(text, pos, 2, second)) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60)
    return std::nullopt;
  if (second == 60) second = 59;  // clamp leap second

  // Fractional seconds: parsed and dropped (seconds resolution).
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }

  std::int64_t offset = 0;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om;
      if (!take_digits(text, pos, 2, oh)) return std::nullopt;
      if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
      if (!take_digits(text, pos, 2, om)) return std::nullopt;
      offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;

  return timestamp_from_civil(year, month, day, hour, minute, second) - offset;
}

std::string format_rfc3339(std::int64_t timestamp) {
  const chr::sys_seconds tp{chr::seconds{timestamp}};
  const auto day_point = chr::floor<chr::days>(tp);
  const chr::year_month_day ymd{day_point};
  const chr::hh_mm_ss hms{tp - day_point};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

}  // namespace driftlab
