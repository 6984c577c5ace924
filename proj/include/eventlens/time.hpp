#pragma once

#include <cstdint>
#include <string>

namespace eventlens {

// Seconds since the Unix epoch, always UTC.
using UtcSeconds = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Half-open interval [start, end) of UTC seconds.
struct TimeWindow {
  UtcSeconds start = 0;
  UtcSeconds end = 0;

  bool contains(UtcSeconds t) const { return t >= start && t < end; }
  std::int64_t length() const { return end - start; }
  bool operator==(const TimeWindow&) const = default;
};

// Throws DataError unless start < end.
TimeWindow make_window(UtcSeconds start, UtcSeconds end);

// Parses "YYYY-MM-DDThh:mm:ss" followed by a mandatory "Z" or "+hh:mm"/"-hh:mm"
// offset and returns the instant as UTC seconds.
UtcSeconds parse_iso8601(const std::string& text);

// Formats as "YYYY-MM-DDThh:mm:ssZ".
std::string format_iso8601(UtcSeconds t);

}  // namespace eventlens
