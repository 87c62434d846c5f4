#ifndef EMMS_SCENARIO_HPP
#define EMMS_SCENARIO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "emms/contacts.hpp"
#include "emms/matcher.hpp"
#include "emms/replay.hpp"

namespace emms {

/// One scenario: a network, its lines, and parameter overrides, loadable
/// from a single JSON file. Relative paths resolve against the scenario
/// file's directory.
struct ScenarioConfig {
  std::string network_path;
  std::vector<std::string> line_paths;
  std::string output_dir;
  MatcherConfig matcher;
  SimConfig sim;
  std::vector<double> tx_ranges{150.0, 300.0};
  std::vector<double> perimeter_radii{2000.0, 4000.0};
  CartPoint reference;
  bool has_reference = false;  // defaults to the network boundary centroid
  double arrival_threshold = 50.0;
};

ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::string& base_dir = {});

ScenarioConfig load_scenario(const std::string& path);

/// Matched-line artifact: the bridge between `match` and `simulate`.
std::string write_matched_line(const MatchedLine& line,
                               const std::vector<std::string>& unmatched_stops);

MatchedLine parse_matched_line(std::string_view json_text);

MatchedLine load_matched_line(const std::string& path);

}  // namespace emms

#endif  // EMMS_SCENARIO_HPP
