#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace iupc {

// Absolute instant, milliseconds since the Unix epoch (UTC). No calendars or
// time zones beyond ISO-8601 parsing; all arithmetic is exact millisecond math.
using Timestamp = std::int64_t;

struct Duration {
    std::int64_t ms = 0;

    auto operator<=>(const Duration&) const = default;

    static Duration minutes(std::int64_t n) { return Duration{n * 60'000}; }
    static Duration hours(std::int64_t n) { return Duration{n * 3'600'000}; }
    static Duration days(std::int64_t n) { return Duration{n * 86'400'000}; }
};

// Accepts "YYYY-MM-DDTHH:MM:SS[.mmm]Z". Throws SyntaxError on anything else.
Timestamp parse_iso8601(std::string_view text);

// Emits "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" when the instant has sub-second part.
std::string format_iso8601(Timestamp t);

// Renders in the largest DSL unit (m, h, d) that divides the duration evenly;
// durations are multiples of a minute by construction.
std::string format_duration(Duration d);

}  // namespace iupc
