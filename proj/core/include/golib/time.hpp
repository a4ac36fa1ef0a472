#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace golib {

/// All domain timestamps are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_rfc3339(Timestamp ts);

/// Accepts `YYYY-MM-DDTHH:MM:SS` followed by `Z` or a `+HH:MM`/`-HH:MM`
/// offset; fractional seconds are truncated. Throws Error(ValidationFailed).
Timestamp parse_rfc3339(std::string_view text);

/// Calendar date (UTC) of a timestamp.
std::chrono::year_month_day utc_date(Timestamp ts);

}  // namespace golib
