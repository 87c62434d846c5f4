#ifndef EMMS_LINE_SPEC_HPP
#define EMMS_LINE_SPEC_HPP

#include <string>
#include <string_view>
#include <vector>

#include "emms/geo.hpp"

namespace emms {

struct StopSpec {
  std::string id;
  GeoPoint pos;
};

/// One bus line as entered: ordered GPS itinerary, stop locations, and the
/// departure timetable in seconds of day.
struct LineSpec {
  std::string line_id;
  std::vector<GeoPoint> itinerary;
  std::vector<StopSpec> stops;
  std::vector<double> departures;
};

void validate(const LineSpec& line);

/// Parses the line input document:
///   {"line_id": str,
///    "route": [{"lat": num, "lon": num}, ...],
///    "stops": [{"id": str, "lat": num, "lon": num}, ...],
///    "departures": ["HH:MM:SS", ...]}
LineSpec parse_line_spec(std::string_view json_text);

LineSpec load_line_spec(const std::string& path);

/// "HH:MM:SS" -> seconds of day. Hours may exceed 23 for trips scheduled
/// past midnight.
double parse_time_of_day(const std::string& text);

std::string format_time_of_day(double seconds);

}  // namespace emms

#endif  // EMMS_LINE_SPEC_HPP
