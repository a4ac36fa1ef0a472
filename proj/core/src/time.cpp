#include "golib/time.hpp"

#include <cctype>
#include <cstdio>

#include "golib/errors.hpp"

namespace golib {

namespace {

using namespace std::chrono;

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw Error(ErrorCode::ValidationFailed, "invalid RFC 3339 timestamp: " + std::string(text));
}

int digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) bad_timestamp(text);
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad_timestamp(text);
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) bad_timestamp(text);
}

}  // namespace

std::string format_rfc3339(Timestamp ts) {
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss tod{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
    const int y = digits(text, 0, 4);
    expect(text, 4, '-');
    const int mo = digits(text, 5, 2);
    expect(text, 7, '-');
    const int d = digits(text, 8, 2);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) bad_timestamp(text);
    const int h = digits(text, 11, 2);
    expect(text, 13, ':');
    const int mi = digits(text, 14, 2);
    expect(text, 16, ':');
    const int s = digits(text, 17, 2);

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) bad_timestamp(text);
    }
    if (pos >= text.size()) bad_timestamp(text);

    seconds offset{0};
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '+' ? 1 : -1;
        const int oh = digits(text, pos + 1, 2);
        expect(text, pos + 3, ':');
        const int om = digits(text, pos + 4, 2);
        if (oh > 23 || om > 59) bad_timestamp(text);
        offset = seconds{sign * (oh * 3600 + om * 60)};
        pos += 6;
    } else {
        bad_timestamp(text);
    }
    if (pos != text.size()) bad_timestamp(text);

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) bad_timestamp(text);
    const auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return time_point_cast<seconds>(local - offset);
}

std::chrono::year_month_day utc_date(Timestamp ts) {
    return year_month_day{floor<days>(ts)};
}

}  // namespace golib
