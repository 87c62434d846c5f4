#include "emms/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace emms {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(Errc::io, "cannot open '" + path + "'");
  }
  std::ostringstream content;
  content << file.rdbuf();
  return content.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(base_dir) / path).string();
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::string& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed scenario: ") + e.what());
  }
  try {
    ScenarioConfig cfg;
    cfg.network_path = resolve(base_dir, doc.at("network").get<std::string>());
    for (const auto& line : doc.at("lines")) {
      cfg.line_paths.push_back(resolve(base_dir, line.get<std::string>()));
    }
    if (doc.contains("output_dir")) {
      cfg.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
    }
    if (doc.contains("matcher")) {
      const auto& m = doc["matcher"];
      cfg.matcher.radius = m.value("radius", cfg.matcher.radius);
      cfg.matcher.densify_passes =
          m.value("densify_passes", cfg.matcher.densify_passes);
      cfg.matcher.max_consecutive_gaps =
          m.value("max_consecutive_gaps", cfg.matcher.max_consecutive_gaps);
      const std::string geometry = m.value("geometry", std::string("chord"));
      if (geometry == "polyline") {
        cfg.matcher.geometry = MatchGeometry::polyline;
      } else if (geometry != "chord") {
        throw Error(Errc::invalid_config,
                    "matcher geometry must be 'chord' or 'polyline'");
      }
    }
    if (doc.contains("sim")) {
      const auto& s = doc["sim"];
      cfg.sim.sample_interval = s.value("sample_interval", cfg.sim.sample_interval);
      cfg.sim.dwell_time = s.value("dwell_time", cfg.sim.dwell_time);
      cfg.sim.start = s.value("begin", cfg.sim.start);
      cfg.sim.end = s.value("end", cfg.sim.end);
      cfg.sim.speed_factor = s.value("speed_factor", cfg.sim.speed_factor);
    }
    if (doc.contains("analysis")) {
      const auto& a = doc["analysis"];
      if (a.contains("ranges")) {
        cfg.tx_ranges = a["ranges"].get<std::vector<double>>();
      }
      if (a.contains("perimeters")) {
        cfg.perimeter_radii = a["perimeters"].get<std::vector<double>>();
      }
      if (a.contains("reference")) {
        cfg.reference = {a["reference"].at("x").get<double>(),
                         a["reference"].at("y").get<double>()};
        cfg.has_reference = true;
      }
      cfg.arrival_threshold = a.value("arrival_threshold", cfg.arrival_threshold);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("bad scenario document: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(read_file(path),
                        std::filesystem::path(path).parent_path().string());
}

std::string write_matched_line(const MatchedLine& line,
                               const std::vector<std::string>& unmatched_stops) {
  nlohmann::json doc;
  doc["line_id"] = line.line_id();
  doc["edges"] = line.route.edges;
  doc["gap_count"] = line.route.gap_count;
  nlohmann::json stops = nlohmann::json::array();
  for (const MatchedStop& stop : line.stops) {
    stops.push_back(
        {{"id", stop.stop_id}, {"edge", stop.edge_id}, {"offset", stop.offset}});
  }
  doc["stops"] = std::move(stops);
  doc["unmatched_stops"] = unmatched_stops;
  doc["departures"] = line.departures;
  return doc.dump(2) + "\n";
}

MatchedLine parse_matched_line(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed matched line: ") + e.what());
  }
  try {
    MatchedLine line;
    line.route.line_id = doc.at("line_id").get<std::string>();
    line.route.edges = doc.at("edges").get<std::vector<std::string>>();
    line.route.gap_count = doc.value("gap_count", 0);
    if (doc.contains("stops")) {
      for (const auto& s : doc["stops"]) {
        line.stops.push_back({s.at("id").get<std::string>(),
                              s.at("edge").get<std::string>(),
                              s.at("offset").get<double>()});
      }
    }
    if (doc.contains("departures")) {
      line.departures = doc["departures"].get<std::vector<double>>();
    }
    return line;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse,
                std::string("bad matched-line document: ") + e.what());
  }
}

MatchedLine load_matched_line(const std::string& path) {
  return parse_matched_line(read_file(path));
}

}  // namespace emms
