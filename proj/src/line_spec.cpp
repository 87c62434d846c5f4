#include "emms/line_spec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace emms {

void validate(const LineSpec& line) {
  if (line.line_id.empty()) {
    throw Error(Errc::parse, "line_id must be non-empty");
  }
  if (line.itinerary.size() < 2) {
    throw Error(Errc::parse,
                "line '" + line.line_id + "' itinerary needs at least two points");
  }
  for (const GeoPoint& p : line.itinerary) {
    if (!is_valid(p)) {
      throw Error(Errc::invalid_coordinate,
                  "line '" + line.line_id + "' has an invalid itinerary point");
    }
  }
  for (const StopSpec& s : line.stops) {
    if (s.id.empty() || !is_valid(s.pos)) {
      throw Error(Errc::parse,
                  "line '" + line.line_id + "' has an invalid stop");
    }
  }
  for (std::size_t i = 1; i < line.departures.size(); ++i) {
    if (!(line.departures[i] > line.departures[i - 1])) {
      throw Error(Errc::parse, "line '" + line.line_id +
                                   "' departures must be strictly increasing");
    }
  }
}

double parse_time_of_day(const std::string& text) {
  int h = 0, m = 0, s = 0;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%d:%d:%d%c", &h, &m, &s, &trailing) != 3 ||
      h < 0 || m < 0 || m > 59 || s < 0 || s > 59) {
    throw Error(Errc::parse, "bad departure time '" + text + "'");
  }
  return h * 3600.0 + m * 60.0 + s;
}

std::string format_time_of_day(double seconds) {
  const long long total = static_cast<long long>(std::llround(seconds));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld", total / 3600,
                (total / 60) % 60, total % 60);
  return buf;
}

LineSpec parse_line_spec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed line document: ") + e.what());
  }
  try {
    LineSpec line;
    line.line_id = doc.at("line_id").get<std::string>();
    for (const auto& p : doc.at("route")) {
      line.itinerary.push_back(
          {p.at("lat").get<double>(), p.at("lon").get<double>()});
    }
    if (doc.contains("stops")) {
      for (const auto& s : doc.at("stops")) {
        line.stops.push_back({s.at("id").get<std::string>(),
                              {s.at("lat").get<double>(),
                               s.at("lon").get<double>()}});
      }
    }
    if (doc.contains("departures")) {
      for (const auto& d : doc.at("departures")) {
        line.departures.push_back(parse_time_of_day(d.get<std::string>()));
      }
    }
    validate(line);
    return line;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("bad line document: ") + e.what());
  }
}

LineSpec load_line_spec(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(Errc::io, "cannot open line file '" + path + "'");
  }
  std::ostringstream content;
  content << file.rdbuf();
  return parse_line_spec(content.str());
}

}  // namespace emms
