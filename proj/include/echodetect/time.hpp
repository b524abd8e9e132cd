#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace echodetect {

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

inline constexpr double kMsPerHour = 3600.0 * 1000.0;

// Parses an ISO-8601 timestamp such as "2012-12-01T10:30:00Z" or
// "2012-12-01T10:30:00.250+02:00". Fractional seconds beyond
// milliseconds are truncated. Throws Error(Errc::Parse) on bad input.
TimestampMs parse_timestamp(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(TimestampMs ms);

}  // namespace echodetect
