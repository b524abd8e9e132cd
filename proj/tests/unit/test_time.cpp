#include <doctest.h>

#include <echodetect/common.hpp>
#include <echodetect/time.hpp>

using echodetect::Error;
using echodetect::parse_timestamp;
using echodetect::format_timestamp;
using echodetect::TimestampMs;

TEST_CASE("epoch and known instants parse to the right millisecond") {
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_timestamp("1970-01-01T00:00:01Z") == 1000);
  CHECK(parse_timestamp("1970-01-02T00:00:00Z") == 86400000);
  // 2012-12-01T10:30:00Z: 15675 days plus 10.5 hours.
  CHECK(parse_timestamp("2012-12-01T10:30:00Z") ==
        15675LL * 86400000 + (10 * 3600 + 30 * 60) * 1000LL);
  CHECK(parse_timestamp("2000-02-29T00:00:00Z") ==
        parse_timestamp("2000-02-28T00:00:00Z") + 86400000);
}

TEST_CASE("fractional seconds truncate to milliseconds") {
  CHECK(parse_timestamp("1970-01-01T00:00:00.250Z") == 250);
  CHECK(parse_timestamp("1970-01-01T00:00:00.2Z") == 200);
  CHECK(parse_timestamp("1970-01-01T00:00:00.25Z") == 250);
  CHECK(parse_timestamp("1970-01-01T00:00:00.999999Z") == 999);
  CHECK(parse_timestamp("1970-01-01T00:00:00.0001Z") == 0);
}

TEST_CASE("timezone offsets shift toward UTC") {
  CHECK(parse_timestamp("1970-01-01T02:00:00+02:00") == 0);
  CHECK(parse_timestamp("1969-12-31T22:00:00-02:00") == 0);
  CHECK(parse_timestamp("2012-12-01T10:30:00+00:00") ==
        parse_timestamp("2012-12-01T10:30:00Z"));
  CHECK(parse_timestamp("2012-12-01T10:30:00+05:30") ==
        parse_timestamp("2012-12-01T05:00:00Z"));
}

TEST_CASE("leap seconds fold into the last normal second") {
  CHECK(parse_timestamp("2012-06-30T23:59:60Z") ==
        parse_timestamp("2012-06-30T23:59:59Z"));
}

TEST_CASE("bad timestamps are rejected") {
  const char* bad[] = {
      "",
      "2012-12-01",
      "2012-12-01 10:30:00Z",
      "2012-13-01T00:00:00Z",
      "2012-00-01T00:00:00Z",
      "2012-02-30T00:00:00Z",
      "2011-02-29T00:00:00Z",
      "1900-02-29T00:00:00Z",
      "2012-12-01T24:00:00Z",
      "2012-12-01T10:61:00Z",
      "2012-12-01T10:30:61Z",
      "2012-12-01T10:30:00",
      "2012-12-01T10:30:00X",
      "2012-12-01T10:30:00+0200",
      "2012-12-01T10:30:00+02:0",
      "2012-12-01T10:30:00.Z",
      "12-12-01T10:30:00Z",
      "2012-12-01T10:30:00Zjunk",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_timestamp(text), Error);
  }
}

TEST_CASE("format round-trips parse across a wide range") {
  const TimestampMs samples[] = {
      0,
      1,
      999,
      86400000,
      -86400000,
      parse_timestamp("2012-12-01T10:30:00.250Z"),
      parse_timestamp("1999-12-31T23:59:59.999Z"),
      parse_timestamp("2100-01-01T00:00:00Z"),
      parse_timestamp("1912-06-23T12:00:00Z"),
  };
  for (TimestampMs ms : samples) {
    CAPTURE(ms);
    CHECK(parse_timestamp(format_timestamp(ms)) == ms);
  }
  CHECK(format_timestamp(0) == "1970-01-01T00:00:00.000Z");
  CHECK(format_timestamp(parse_timestamp("2012-12-01T10:30:00.250Z")) ==
        "2012-12-01T10:30:00.250Z");
}

TEST_CASE("parse-format round trip over pseudo-random instants") {
  // Deterministic LCG; spans roughly 1902..2106.
  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  for (int i = 0; i < 2000; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const TimestampMs ms =
        static_cast<TimestampMs>(state % 6400000000000ULL) - 2145916800000LL;
    CAPTURE(ms);
    CHECK(parse_timestamp(format_timestamp(ms)) == ms);
  }
}
