#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tokennet {

/// Calendar day, counted in days since 1970-01-01 UTC.
using Day = std::int32_t;

/// Instant, counted in seconds since 1970-01-01T00:00:00Z.
using UnixTime = std::int64_t;

inline constexpr std::int64_t seconds_per_day = 86400;

/// UTC calendar day containing the instant (floor division, works before 1970 too).
constexpr Day day_of(UnixTime t) {
    std::int64_t d = t / seconds_per_day;
    if (t % seconds_per_day < 0) --d;
    return static_cast<Day>(d);
}

/// YYYY-MM-DD.
std::string format_day(Day d);

/// Parses YYYY-MM-DD. Rejects out-of-range months/days.
std::optional<Day> parse_day(std::string_view s);

/// Parses an ISO-8601 timestamp at second resolution: "YYYY-MM-DD[T ]HH:MM:SS"
/// with an optional "Z" or " UTC" suffix. A bare date means midnight.
std::optional<UnixTime> parse_timestamp(std::string_view s);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(UnixTime t);

}  // namespace tokennet
