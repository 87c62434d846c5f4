#include <doctest.h>

#include "emms/line_spec.hpp"

using namespace emms;

namespace {
const char* kLineDoc = R"({
  "line_id": "464",
  "route": [{"lat": -25.43, "lon": -49.27}, {"lat": -25.44, "lon": -49.28}],
  "stops": [{"id": "s1", "lat": -25.435, "lon": -49.275}],
  "departures": ["16:00:00", "16:15:30", "17:02:03"]
})";
}

TEST_CASE("parse_line_spec reads the line document") {
  const LineSpec line = parse_line_spec(kLineDoc);
  CHECK(line.line_id == "464");
  REQUIRE(line.itinerary.size() == 2);
  CHECK(line.itinerary[0].lat == doctest::Approx(-25.43));
  REQUIRE(line.stops.size() == 1);
  CHECK(line.stops[0].id == "s1");
  REQUIRE(line.departures.size() == 3);
  CHECK(line.departures[0] == 16 * 3600);
  CHECK(line.departures[1] == 16 * 3600 + 15 * 60 + 30);
  CHECK(line.departures[2] == 17 * 3600 + 2 * 60 + 3);
}

TEST_CASE("departure times round trip through formatting") {
  CHECK(format_time_of_day(parse_time_of_day("05:07:09")) == "05:07:09");
  CHECK(parse_time_of_day("25:00:00") == 25 * 3600);  // past midnight
}

TEST_CASE("bad departure strings are rejected") {
  CHECK_THROWS_AS(parse_time_of_day("later"), Error);
  CHECK_THROWS_AS(parse_time_of_day("12:61:00"), Error);
  CHECK_THROWS_AS(parse_time_of_day("12:00:00x"), Error);
}

TEST_CASE("line validation catches structural problems") {
  try {
    parse_line_spec(R"({"line_id": "", "route": [
      {"lat": 0, "lon": 0}, {"lat": 1, "lon": 1}]})");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
  }
  // Single-point itinerary.
  CHECK_THROWS_AS(
      parse_line_spec(R"({"line_id": "x", "route": [{"lat": 0, "lon": 0}]})"),
      Error);
  // Non-increasing departures.
  CHECK_THROWS_AS(parse_line_spec(R"({"line_id": "x",
    "route": [{"lat": 0, "lon": 0}, {"lat": 1, "lon": 1}],
    "departures": ["10:00:00", "09:00:00"]})"),
                  Error);
  // Latitude out of range.
  CHECK_THROWS_AS(parse_line_spec(R"({"line_id": "x",
    "route": [{"lat": 95, "lon": 0}, {"lat": 1, "lon": 1}]})"),
                  Error);
  // Malformed JSON.
  CHECK_THROWS_AS(parse_line_spec("{"), Error);
}
