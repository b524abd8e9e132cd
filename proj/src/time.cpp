#include "echodetect/time.hpp"

#include <cctype>
#include <cstdio>

#include "echodetect/common.hpp"

namespace echodetect {

namespace {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian
// calendar (Howard Hinnant's civil-date algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  char take() { return s_[pos_++]; }

  // Reads exactly n digits into out; false if fewer are present.
  bool digits(int n, int& out) {
    int v = 0;
    for (int i = 0; i < n; ++i) {
      if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) return false;
      v = v * 10 + (take() - '0');
    }
    out = v;
    return true;
  }

  bool expect(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(std::string_view text) {
  raise(Errc::Parse, "invalid timestamp \"" + std::string(text) + "\"");
}

}  // namespace

TimestampMs parse_timestamp(std::string_view text) {
  Cursor c(text);
  int year, month, day, hour, minute, second;
  if (!c.digits(4, year) || !c.expect('-') || !c.digits(2, month) ||
      !c.expect('-') || !c.digits(2, day)) {
    bad(text);
  }
  if (!(c.expect('T') || c.expect('t'))) bad(text);
  if (!c.digits(2, hour) || !c.expect(':') || !c.digits(2, minute) ||
      !c.expect(':') || !c.digits(2, second)) {
    bad(text);
  }

  int millis = 0;
  if (c.expect('.')) {
    int count = 0;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
      int digit = c.take() - '0';
      if (count < 3) millis = millis * 10 + digit;
      ++count;
    }
    if (count == 0) bad(text);
    while (count < 3) {
      millis *= 10;
      ++count;
    }
  }

  std::int64_t offset_ms = 0;
  if (c.expect('Z') || c.expect('z')) {
    // UTC, nothing to adjust.
  } else if (c.peek() == '+' || c.peek() == '-') {
    int sign = c.take() == '+' ? 1 : -1;
    int oh, om;
    if (!c.digits(2, oh) || !c.expect(':') || !c.digits(2, om)) bad(text);
    if (oh > 23 || om > 59) bad(text);
    offset_ms = sign * ((oh * 60 + om) * 60LL * 1000);
  } else {
    bad(text);
  }
  if (!c.done()) bad(text);

  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 60) {
    bad(text);
  }
  if (second == 60) second = 59;  // fold leap seconds

  std::int64_t days = days_from_civil(year, month, day);
  std::int64_t ms =
      (((days * 24 + hour) * 60 + minute) * 60 + second) * 1000 + millis;
  return ms - offset_ms;
}

std::string format_timestamp(TimestampMs ms) {
  std::int64_t days = ms / 86400000;
  std::int64_t rem = ms % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --days;
  }
  int y, mo, d;
  civil_from_days(days, y, mo, d);
  int h = static_cast<int>(rem / 3600000);
  rem %= 3600000;
  int mi = static_cast<int>(rem / 60000);
  rem %= 60000;
  int s = static_cast<int>(rem / 1000);
  int mil = static_cast<int>(rem % 1000);

  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, mo,
                d, h, mi, s, mil);
  return buf;
}

}  // namespace echodetect
