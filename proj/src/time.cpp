#include "iupc/time.hpp"

#include <array>
#include <cstdio>

#include "iupc/errors.hpp"

namespace iupc {

namespace {

// Howard Hinnant's days-from-civil; exact for the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t count, std::int64_t& out) {
    if (pos + count > s.size()) return false;
    std::int64_t v = 0;
    for (std::size_t i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
    auto fail = [&]() -> Timestamp {
        throw SyntaxError("invalid ISO-8601 timestamp: '" + std::string(text) + "'");
    };
    std::int64_t year, month, day, hour, minute, second, millis = 0;
    if (!parse_fixed_digits(text, 0, 4, year)) return fail();
    if (text.size() < 20 || text[4] != '-') return fail();
    if (!parse_fixed_digits(text, 5, 2, month) || text[7] != '-') return fail();
    if (!parse_fixed_digits(text, 8, 2, day) || text[10] != 'T') return fail();
    if (!parse_fixed_digits(text, 11, 2, hour) || text[13] != ':') return fail();
    if (!parse_fixed_digits(text, 14, 2, minute) || text[16] != ':') return fail();
    if (!parse_fixed_digits(text, 17, 2, second)) return fail();
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        if (!parse_fixed_digits(text, pos + 1, 3, millis)) return fail();
        pos += 4;
    }
    if (pos + 1 != text.size() || text[pos] != 'Z') return fail();
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 59)
        return fail();
    std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                        static_cast<unsigned>(day));
    return ((days * 24 + hour) * 60 + minute) * 60'000 + second * 1000 + millis;
}

std::string format_iso8601(Timestamp t) {
    std::int64_t ms = t % 1000;
    std::int64_t secs = t / 1000;
    if (ms < 0) {
        ms += 1000;
        secs -= 1;
    }
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[40];
    if (ms != 0) {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                      static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                      static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60),
                      static_cast<long long>(ms));
    } else {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                      static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                      static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
    }
    return buf;
}

std::string format_duration(Duration d) {
    const std::int64_t day = 86'400'000, hour = 3'600'000, minute = 60'000;
    char buf[32];
    if (d.ms % day == 0)
        std::snprintf(buf, sizeof buf, "%lldd", static_cast<long long>(d.ms / day));
    else if (d.ms % hour == 0)
        std::snprintf(buf, sizeof buf, "%lldh", static_cast<long long>(d.ms / hour));
    else
        std::snprintf(buf, sizeof buf, "%lldm", static_cast<long long>(d.ms / minute));
    return buf;
}

}  // namespace iupc
