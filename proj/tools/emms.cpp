// Command-line front end: match -> simulate -> analyze -> report.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emms/contacts.hpp"
#include "emms/emitter.hpp"
#include "emms/matcher.hpp"
#include "emms/network.hpp"
#include "emms/replay.hpp"
#include "emms/scenario.hpp"
#include "emms/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw emms::Error(emms::Errc::io, "cannot write '" + path.string() + "'");
  }
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw emms::Error(emms::Errc::io, "cannot read '" + path.string() + "'");
  }
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

int require_inputs(const std::vector<std::string>& paths) {
  for (const std::string& p : paths) {
    if (!fs::exists(p)) {
      std::cerr << "usage error: input '" << p << "' does not exist\n";
      return kExitUsage;
    }
  }
  return kExitOk;
}

emms::ProjectionContext resolve_context(const emms::RoadNetwork& net,
                                        std::optional<double> origin_lat,
                                        std::optional<double> origin_lon) {
  if (origin_lat && origin_lon) {
    return emms::ProjectionContext{{*origin_lat, *origin_lon}};
  }
  return net.projection_context();
}

// ---------------------------------------------------------------------------
// match

struct MatchArgs {
  std::string scenario_path;
  std::string net_path;
  std::vector<std::string> line_paths;
  std::string out_dir = "out";
  std::optional<double> radius;
  std::optional<int> densify;
  std::optional<int> max_gaps;
  std::string geometry;
  std::optional<double> origin_lat;
  std::optional<double> origin_lon;
};

int run_match(const MatchArgs& args) {
  emms::MatcherConfig cfg;
  std::string net_path = args.net_path;
  std::vector<std::string> line_paths = args.line_paths;
  std::string out_dir = args.out_dir;
  if (!args.scenario_path.empty()) {
    if (require_inputs({args.scenario_path}) != kExitOk) return kExitUsage;
    const emms::ScenarioConfig scenario =
        emms::load_scenario(args.scenario_path);
    cfg = scenario.matcher;
    if (net_path.empty()) net_path = scenario.network_path;
    if (line_paths.empty()) line_paths = scenario.line_paths;
    if (!scenario.output_dir.empty() && args.out_dir == "out") {
      out_dir = scenario.output_dir;
    }
  }
  if (args.radius) cfg.radius = *args.radius;
  if (args.densify) cfg.densify_passes = *args.densify;
  if (args.max_gaps) cfg.max_consecutive_gaps = *args.max_gaps;
  if (!args.geometry.empty()) {
    cfg.geometry = args.geometry == "polyline" ? emms::MatchGeometry::polyline
                                               : emms::MatchGeometry::chord;
  }
  if (net_path.empty() || line_paths.empty()) {
    std::cerr << "usage error: match needs --net and --lines (or --scenario)\n";
    return kExitUsage;
  }
  if (require_inputs({net_path}) != kExitOk ||
      require_inputs(line_paths) != kExitOk) {
    return kExitUsage;
  }

  const emms::RoadNetwork net = emms::load_network(net_path);
  const emms::ProjectionContext ctx =
      resolve_context(net, args.origin_lat, args.origin_lon);
  const emms::Matcher matcher(net, cfg);

  json errors = json::array();
  std::vector<emms::MatchedLine> matched;
  for (const std::string& path : line_paths) {
    try {
      const emms::LineSpec line = emms::load_line_spec(path);
      emms::MatchTrace trace;
      emms::MatchedLine result;
      result.route = matcher.match_route(line, ctx, &trace);
      const emms::StopMatchReport stops =
          matcher.match_stops(result.route, line.stops, ctx);
      result.stops = stops.matched;
      result.departures = line.departures;

      write_file(fs::path(out_dir) / (line.line_id + ".match.json"),
                 emms::write_matched_line(result, stops.unmatched));
      write_file(fs::path(out_dir) / (line.line_id + ".conference.json"),
                 emms::write_conference(line.line_id, cfg, trace, result.route));
      matched.push_back(std::move(result));
    } catch (const emms::Error& e) {
      errors.push_back({{"file", path}, {"error", e.what()}});
      std::cerr << "match failed for '" << path << "': " << e.what() << "\n";
    }
  }

  std::sort(matched.begin(), matched.end(),
            [](const emms::MatchedLine& a, const emms::MatchedLine& b) {
              return a.line_id() < b.line_id();
            });
  write_file(fs::path(out_dir) / "routes.rou.xml", emms::emit_routes(matched));
  write_file(fs::path(out_dir) / "stops.add.xml",
             emms::emit_stops(net, matched));
  if (!errors.empty()) {
    write_file(fs::path(out_dir) / "match_errors.json", errors.dump(2) + "\n");
    return kExitData;
  }
  std::cout << "matched " << matched.size() << " line(s) into " << out_dir
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string scenario_path;
  std::string net_path;
  std::vector<std::string> matched_paths;  // files or directories
  std::string out_path = "trace.csv";
  std::optional<double> sample_interval;
  std::optional<double> dwell;
  std::optional<double> speed_factor;
  std::optional<double> begin;
  std::optional<double> end;
};

int run_simulate(const SimulateArgs& args) {
  emms::SimConfig cfg;
  std::string net_path = args.net_path;
  std::vector<std::string> matched_inputs = args.matched_paths;
  if (!args.scenario_path.empty()) {
    if (require_inputs({args.scenario_path}) != kExitOk) return kExitUsage;
    const emms::ScenarioConfig scenario =
        emms::load_scenario(args.scenario_path);
    cfg = scenario.sim;
    if (net_path.empty()) net_path = scenario.network_path;
    if (matched_inputs.empty() && !scenario.output_dir.empty()) {
      matched_inputs.push_back(scenario.output_dir);
    }
  }
  if (args.sample_interval) cfg.sample_interval = *args.sample_interval;
  if (args.dwell) cfg.dwell_time = *args.dwell;
  if (args.speed_factor) cfg.speed_factor = *args.speed_factor;
  if (args.begin) cfg.start = *args.begin;
  if (args.end) cfg.end = *args.end;
  if (cfg.sample_interval <= 0.0 || cfg.dwell_time < 0.0 ||
      cfg.speed_factor <= 0.0 || cfg.speed_factor > 1.0 ||
      !(cfg.start < cfg.end)) {
    std::cerr << "usage error: bad replay parameters (interval/dwell/"
                 "speed-factor/window)\n";
    return kExitUsage;
  }
  if (net_path.empty() || matched_inputs.empty()) {
    std::cerr << "usage error: simulate needs --net and --matched (or "
                 "--scenario)\n";
    return kExitUsage;
  }
  if (require_inputs({net_path}) != kExitOk ||
      require_inputs(matched_inputs) != kExitOk) {
    return kExitUsage;
  }

  std::vector<std::string> files;
  for (const std::string& input : matched_inputs) {
    if (fs::is_directory(input)) {
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.path().string().ends_with(".match.json")) {
          files.push_back(entry.path().string());
        }
      }
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "usage error: no matched-line artifacts found\n";
    return kExitUsage;
  }

  const emms::RoadNetwork net = emms::load_network(net_path);
  std::vector<emms::MatchedLine> lines;
  for (const std::string& file : files) {
    lines.push_back(emms::load_matched_line(file));
  }
  const std::vector<emms::TraceFrame> frames = emms::simulate(net, lines, cfg);
  write_file(args.out_path, emms::write_trace(frames));
  std::cout << "wrote " << frames.size() << " frame(s) to " << args.out_path
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string scenario_path;
  std::string trace_path;
  std::string out_dir = "analysis";
  std::vector<double> ranges;
  std::vector<double> perimeters;
  std::optional<double> ref_x;
  std::optional<double> ref_y;
  std::optional<double> arrival;
  std::optional<double> clip;
  std::size_t bins = 40;
  bool include_censored = false;
};

json summary_or_null(const std::vector<double>& samples, std::size_t bins,
                     std::optional<double> clip) {
  if (samples.empty()) {
    return nullptr;
  }
  return json::parse(emms::to_json(emms::summarize(samples, bins, clip)));
}

json build_summary(const emms::MetricsBundle& metrics,
                   const emms::AnalysisConfig& cfg, const AnalyzeArgs& args) {
  std::vector<double> contact, inter, degrees, totals, densities, travel;
  std::size_t censored_contact = 0, censored_inter = 0;
  for (const emms::ContactInterval& i : metrics.intervals) {
    const bool is_contact = i.kind == emms::ContactInterval::Kind::contact;
    if (i.censored) {
      (is_contact ? censored_contact : censored_inter) += 1;
      if (!args.include_censored) {
        continue;
      }
    }
    (is_contact ? contact : inter).push_back(i.duration());
  }
  for (const emms::DegreeSample& s : metrics.degrees) {
    degrees.push_back(s.degree);
  }
  for (const emms::FrameCount& c : metrics.total_connected) {
    totals.push_back(c.count);
  }
  for (const emms::FrameCount& c : metrics.in_perimeter) {
    densities.push_back(c.count);
  }
  for (const emms::TravelTime& t : metrics.travel.arrived) {
    travel.push_back(t.duration);
  }

  json doc;
  doc["tx_range"] = cfg.tx_range;
  doc["perimeter_radius"] = cfg.perimeter_radius;
  doc["arrival_threshold"] = cfg.arrival_threshold;
  doc["reference"] = {{"x", cfg.reference.x}, {"y", cfg.reference.y}};
  doc["metrics"]["contact"] = summary_or_null(contact, args.bins, args.clip);
  doc["metrics"]["inter_contact"] = summary_or_null(inter, args.bins, args.clip);
  doc["metrics"]["connectivity"] =
      summary_or_null(degrees, args.bins, std::nullopt);
  doc["metrics"]["total_connected"] =
      summary_or_null(totals, args.bins, std::nullopt);
  doc["metrics"]["vehicles_in_perimeter"] =
      summary_or_null(densities, args.bins, std::nullopt);
  doc["metrics"]["travel_time"] = summary_or_null(travel, args.bins, std::nullopt);
  doc["censored"] = {{"contact", censored_contact},
                     {"inter_contact", censored_inter}};
  doc["travel"] = {{"arrived", metrics.travel.arrived.size()},
                   {"not_arrived", metrics.travel.not_arrived.size()},
                   {"never_entered", metrics.travel.never_entered.size()}};
  return doc;
}

std::string combo_tag(double range, double perimeter) {
  const auto fmt = [](double v) {
    std::string s = std::to_string(static_cast<long long>(v));
    return s;
  };
  return "r" + fmt(range) + "_p" + fmt(perimeter);
}

int run_analyze(const AnalyzeArgs& args) {
  std::vector<double> ranges = args.ranges;
  std::vector<double> perimeters = args.perimeters;
  emms::CartPoint reference{0.0, 0.0};
  bool have_reference = false;
  double arrival = 50.0;
  if (!args.scenario_path.empty()) {
    if (require_inputs({args.scenario_path}) != kExitOk) return kExitUsage;
    const emms::ScenarioConfig scenario =
        emms::load_scenario(args.scenario_path);
    if (ranges.empty()) ranges = scenario.tx_ranges;
    if (perimeters.empty()) perimeters = scenario.perimeter_radii;
    if (scenario.has_reference) {
      reference = scenario.reference;
      have_reference = true;
    }
    arrival = scenario.arrival_threshold;
  }
  if (args.trace_path.empty()) {
    std::cerr << "usage error: analyze needs --trace\n";
    return kExitUsage;
  }
  if (require_inputs({args.trace_path}) != kExitOk) {
    return kExitUsage;
  }
  const std::vector<emms::TraceFrame> frames =
      emms::load_trace(args.trace_path);

  if (args.ref_x && args.ref_y) {
    reference = {*args.ref_x, *args.ref_y};
    have_reference = true;
  }
  (void)have_reference;
  if (args.arrival) arrival = *args.arrival;
  if (ranges.empty()) ranges = {150.0, 300.0};
  if (perimeters.empty()) perimeters = {2000.0, 4000.0};

  for (const double range : ranges) {
    for (const double perimeter : perimeters) {
      emms::AnalysisConfig cfg;
      cfg.tx_range = range;
      cfg.perimeter_radius = perimeter;
      cfg.reference = reference;
      cfg.arrival_threshold = arrival;
      const emms::MetricsBundle metrics = emms::analyze_trace(frames, cfg);
      const std::string tag = combo_tag(range, perimeter);
      write_file(fs::path(args.out_dir) / ("metrics_" + tag + ".csv"),
                 emms::write_metrics_csv(metrics));
      write_file(fs::path(args.out_dir) / ("summary_" + tag + ".json"),
                 build_summary(metrics, cfg, args).dump(2) + "\n");
    }
  }
  std::cout << "analyzed " << frames.size() << " frame(s) into " << args.out_dir
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> summary_paths;
  std::string out_path = "report.json";
  std::string real_path;
  std::string metrics_path;
  double tolerance = 0.2;
};

int run_report(const ReportArgs& args) {
  if (args.summary_paths.empty()) {
    std::cerr << "usage error: report needs at least one --summaries input\n";
    return kExitUsage;
  }
  if (require_inputs(args.summary_paths) != kExitOk) {
    return kExitUsage;
  }
  if (!args.real_path.empty() && args.metrics_path.empty()) {
    std::cerr << "usage error: --real needs --metrics to pair against\n";
    return kExitUsage;
  }

  std::vector<json> summaries;
  std::set<std::pair<double, double>> seen;
  for (const std::string& path : args.summary_paths) {
    json doc;
    try {
      doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
      throw emms::Error(emms::Errc::parse,
                        "bad summary '" + path + "': " + e.what());
    }
    const std::pair<double, double> key{doc.value("tx_range", 0.0),
                                        doc.value("perimeter_radius", 0.0)};
    if (!seen.insert(key).second) {
      throw emms::Error(emms::Errc::duplicate_id,
                        "duplicate summary for the same configuration in '" +
                            path + "'");
    }
    summaries.push_back(std::move(doc));
  }
  std::sort(summaries.begin(), summaries.end(),
            [](const json& a, const json& b) {
              const auto ka = std::make_pair(a.value("tx_range", 0.0),
                                             a.value("perimeter_radius", 0.0));
              const auto kb = std::make_pair(b.value("tx_range", 0.0),
                                             b.value("perimeter_radius", 0.0));
              return ka < kb;
            });

  const fs::path out_dir = fs::path(args.out_path).parent_path();
  json report;
  report["configurations"] = summaries;

  // Density CSVs, one per present metric per configuration.
  for (const json& summary : summaries) {
    const std::string tag = combo_tag(summary.value("tx_range", 0.0),
                                      summary.value("perimeter_radius", 0.0));
    if (!summary.contains("metrics")) continue;
    for (const auto& [metric, value] : summary["metrics"].items()) {
      if (value.is_null() || !value.contains("density")) continue;
      std::ostringstream csv;
      csv << "bin_center,frequency\n";
      char buf[80];
      for (const auto& bin : value["density"]) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n",
                      bin["center"].get<double>(),
                      bin["frequency"].get<double>());
        csv << buf;
      }
      write_file(out_dir / ("density_" + metric + "_" + tag + ".csv"),
                 csv.str());
    }
  }

  if (!args.real_path.empty()) {
    if (require_inputs({args.real_path, args.metrics_path}) != kExitOk) {
      return kExitUsage;
    }
    json real_doc;
    try {
      real_doc = json::parse(read_file(args.real_path));
    } catch (const json::parse_error& e) {
      throw emms::Error(emms::Errc::parse,
                        std::string("bad real-timetable file: ") + e.what());
    }
    if (!real_doc.contains("durations") || !real_doc["durations"].is_object()) {
      throw emms::Error(emms::Errc::parse,
                        "real-timetable file needs a 'durations' object");
    }
    // Simulated travel times, by vehicle, from the metrics CSV.
    std::map<std::string, double> simulated;
    std::istringstream metrics(read_file(args.metrics_path));
    std::string line;
    std::getline(metrics, line);  // header
    while (std::getline(metrics, line)) {
      if (!line.starts_with("travel_time,")) continue;
      const auto p1 = line.find(',');
      const auto p2 = line.find(',', p1 + 1);
      const auto p3 = line.find(',', p2 + 1);
      if (p3 == std::string::npos) continue;
      simulated[line.substr(p1 + 1, p2 - p1 - 1)] =
          std::stod(line.substr(p3 + 1));
    }
    std::vector<double> real_values, sim_values;
    for (const auto& [vehicle, value] : real_doc["durations"].items()) {
      const auto it = simulated.find(vehicle);
      if (it == simulated.end()) {
        throw emms::Error(emms::Errc::pairing,
                          "no simulated travel time for trip '" + vehicle + "'");
      }
      real_values.push_back(value.get<double>());
      sim_values.push_back(it->second);
    }
    const emms::CompatibilityReport compat =
        emms::compatibility(real_values, sim_values, args.tolerance);
    report["compatibility"] = json::parse(emms::write_compatibility_json(compat));
    report["compatibility"]["tolerance"] = args.tolerance;
  }

  write_file(args.out_path, report.dump(2) + "\n");
  std::cout << "wrote report to " << args.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMMS toolkit: map-match transit lines onto a road network, "
               "replay them, and analyze contact patterns"};
  app.require_subcommand(1);

  MatchArgs match_args;
  CLI::App* match = app.add_subcommand(
      "match", "Match line itineraries and stops onto the network");
  match->add_option("--scenario", match_args.scenario_path, "Scenario JSON");
  match->add_option("--net", match_args.net_path, "Network document");
  match->add_option("--lines", match_args.line_paths, "Line JSON documents");
  match->add_option("--out", match_args.out_dir, "Output directory");
  match->add_option("--radius", match_args.radius,
                    "Candidate radius, meters (default 15)");
  match->add_option("--densify", match_args.densify,
                    "Densification passes (default 1)");
  match->add_option("--max-gaps", match_args.max_gaps,
                    "Consecutive gap tolerance (default 5)");
  match->add_option("--match-geometry", match_args.geometry,
                    "chord|polyline (default chord)")
      ->check(CLI::IsMember({"chord", "polyline"}));
  match->add_option("--origin-lat", match_args.origin_lat,
                    "Projection origin latitude override");
  match->add_option("--origin-lon", match_args.origin_lon,
                    "Projection origin longitude override");

  SimulateArgs sim_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Replay matched lines into a trace");
  simulate->add_option("--scenario", sim_args.scenario_path, "Scenario JSON");
  simulate->add_option("--net", sim_args.net_path, "Network document");
  simulate->add_option("--matched", sim_args.matched_paths,
                       "Matched-line artifacts or their directory");
  simulate->add_option("--out", sim_args.out_path, "Trace CSV path");
  simulate->add_option("--sample-interval", sim_args.sample_interval,
                       "Seconds between frames (default 3)");
  simulate->add_option("--dwell", sim_args.dwell, "Stop dwell seconds");
  simulate->add_option("--speed-factor", sim_args.speed_factor,
                       "Speed-limit scale in (0,1]");
  simulate->add_option("--begin", sim_args.begin, "Window start, seconds");
  simulate->add_option("--end", sim_args.end, "Window end, seconds");

  AnalyzeArgs analyze_args;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Compute mobility metrics from a trace");
  analyze->add_option("--scenario", analyze_args.scenario_path,
                      "Scenario JSON");
  analyze->add_option("--trace", analyze_args.trace_path, "Trace CSV");
  analyze->add_option("--out", analyze_args.out_dir, "Output directory");
  analyze->add_option("--range", analyze_args.ranges,
                      "Transmission range(s), meters (default 150 300)");
  analyze->add_option("--perimeter", analyze_args.perimeters,
                      "Perimeter radius(es), meters (default 2000 4000)");
  analyze->add_option("--ref-x", analyze_args.ref_x, "Reference x, meters");
  analyze->add_option("--ref-y", analyze_args.ref_y, "Reference y, meters");
  analyze->add_option("--arrival", analyze_args.arrival,
                      "Arrival threshold, meters (default 50)");
  analyze->add_option("--clip", analyze_args.clip,
                      "Clip interval histograms at this value");
  analyze->add_option("--bins", analyze_args.bins, "Histogram bins (default 40)");
  analyze->add_flag("--include-censored", analyze_args.include_censored,
                    "Include censored intervals in summaries");

  ReportArgs report_args;
  CLI::App* report =
      app.add_subcommand("report", "Consolidate analysis summaries");
  report->add_option("--summaries", report_args.summary_paths,
                     "Summary JSON files from analyze");
  report->add_option("--out", report_args.out_path, "Report JSON path");
  report->add_option("--real", report_args.real_path,
                     "Real travel-time JSON for the compatibility section");
  report->add_option("--metrics", report_args.metrics_path,
                     "Metrics CSV supplying simulated travel times");
  report->add_option("--tolerance", report_args.tolerance,
                     "Compatibility tolerance fraction (default 0.2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (match->parsed()) return run_match(match_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (report->parsed()) return run_report(report_args);
  } catch (const emms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
