#include "eventlens/time.hpp"

#include <cctype>
#include <cstdio>

#include "eventlens/error.hpp"

namespace eventlens {

namespace {

// Civil <-> day-count conversions, valid for the proleptic Gregorian
// calendar (Howard Hinnant's algorithms).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t* y, unsigned* m, unsigned* d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t year = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = doy - (153 * mp + 2) / 5 + 1;
  *m = mp < 10 ? mp + 3 : mp - 9;
  *y = year + (*m <= 2);
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[12] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

bool parse_fixed_uint(const std::string& s, size_t pos, size_t len, unsigned* out) {
  unsigned value = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    value = value * 10 + static_cast<unsigned>(s[i] - '0');
  }
  *out = value;
  return true;
}

[[noreturn]] void bad_timestamp(const std::string& text) {
  throw DataError("invalid timestamp '" + text +
                  "' (expected YYYY-MM-DDThh:mm:ss with Z or +hh:mm offset)");
}

}  // namespace

TimeWindow make_window(UtcSeconds start, UtcSeconds end) {
  if (start >= end) {
    throw DataError("invalid time window: start " + format_iso8601(start) +
                    " must precede end " + format_iso8601(end));
  }
  return TimeWindow{start, end};
}

UtcSeconds parse_iso8601(const std::string& text) {
  // Shortest valid form is "YYYY-MM-DDThh:mm:ssZ" (20 chars); offset form is
  // 25 chars.
  if (text.size() != 20 && text.size() != 25) bad_timestamp(text);
  unsigned year, month, day, hour, minute, second;
  if (!parse_fixed_uint(text, 0, 4, &year) || text[4] != '-' ||
      !parse_fixed_uint(text, 5, 2, &month) || text[7] != '-' ||
      !parse_fixed_uint(text, 8, 2, &day) || (text[10] != 'T' && text[10] != 't') ||
      !parse_fixed_uint(text, 11, 2, &hour) || text[13] != ':' ||
      !parse_fixed_uint(text, 14, 2, &minute) || text[16] != ':' ||
      !parse_fixed_uint(text, 17, 2, &second)) {
    bad_timestamp(text);
  }
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 59) {
    bad_timestamp(text);
  }

  std::int64_t offset = 0;
  if (text.size() == 20) {
    if (text[19] != 'Z' && text[19] != 'z') bad_timestamp(text);
  } else {
    const char sign = text[19];
    unsigned oh, om;
    if ((sign != '+' && sign != '-') || !parse_fixed_uint(text, 20, 2, &oh) ||
        text[22] != ':' || !parse_fixed_uint(text, 23, 2, &om) || oh > 23 || om > 59) {
      bad_timestamp(text);
    }
    offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
    if (sign == '-') offset = -offset;
  }

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t local = days * kSecondsPerDay + hour * 3600 + minute * 60 + second;
  return local - offset;
}

std::string format_iso8601(UtcSeconds t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  std::int64_t year;
  unsigned month, day;
  civil_from_days(days, &year, &month, &day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02u:%02u:%02uZ",
                static_cast<long long>(year), month, day,
                static_cast<unsigned>(rem / 3600), static_cast<unsigned>(rem / 60 % 60),
                static_cast<unsigned>(rem % 60));
  return buf;
}

}  // namespace eventlens
