#include "tokennet/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace tokennet {

namespace {

namespace chr = std::chrono;

bool parse_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = 0; i < len; ++i) {
        if (s[pos + i] < '0' || s[pos + i] > '9') return false;
    }
    auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return res.ec == std::errc{} && res.ptr == s.data() + pos + len;
}

}  // namespace

std::string format_day(Day d) {
    chr::sys_days sd{chr::days{d}};
    chr::year_month_day ymd{sd};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Day> parse_day(std::string_view s) {
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!parse_uint(s, 0, 4, y) || !parse_uint(s, 5, 2, m) || !parse_uint(s, 8, 2, d))
        return std::nullopt;
    chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                            chr::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    chr::sys_days sd{ymd};
    return static_cast<Day>(sd.time_since_epoch().count());
}

std::optional<UnixTime> parse_timestamp(std::string_view s) {
    // Trim trailing "Z" or " UTC".
    if (s.ends_with(" UTC"))
        s.remove_suffix(4);
    else if (s.ends_with("Z"))
        s.remove_suffix(1);
    if (s.size() == 10) {
        auto d = parse_day(s);
        if (!d) return std::nullopt;
        return static_cast<UnixTime>(*d) * seconds_per_day;
    }
    if (s.size() != 19 || (s[10] != 'T' && s[10] != ' ')) return std::nullopt;
    auto d = parse_day(s.substr(0, 10));
    if (!d) return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!parse_uint(s, 11, 2, hh) || !parse_uint(s, 14, 2, mm) || !parse_uint(s, 17, 2, ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    return static_cast<UnixTime>(*d) * seconds_per_day + hh * 3600 + mm * 60 + ss;
}

std::string format_timestamp(UnixTime t) {
    Day d = day_of(t);
    std::int64_t rem = t - static_cast<std::int64_t>(d) * seconds_per_day;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "T%02d:%02d:%02dZ", static_cast<int>(rem / 3600),
                  static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
    return format_day(d) + buf;
}

}  // namespace tokennet
