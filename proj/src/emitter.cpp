#include "emms/emitter.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace emms {

namespace {

std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

void check_lines(const std::vector<MatchedLine>& lines) {
  std::set<std::string> ids;
  for (const MatchedLine& line : lines) {
    if (line.line_id().empty() || line.route.edges.empty()) {
      throw Error(Errc::integrity, "matched line is incomplete");
    }
    if (!ids.insert(line.line_id()).second) {
      throw Error(Errc::duplicate_id,
                  "duplicate line id '" + line.line_id() + "'");
    }
    for (std::size_t i = 1; i < line.departures.size(); ++i) {
      if (!(line.departures[i] > line.departures[i - 1])) {
        throw Error(Errc::integrity, "line '" + line.line_id() +
                                         "' departures not strictly increasing");
      }
    }
  }
}

}  // namespace

std::string emit_routes(const std::vector<MatchedLine>& lines) {
  check_lines(lines);

  std::vector<const MatchedLine*> by_id;
  for (const MatchedLine& line : lines) {
    by_id.push_back(&line);
  }
  std::sort(by_id.begin(), by_id.end(),
            [](const MatchedLine* a, const MatchedLine* b) {
              return a->line_id() < b->line_id();
            });

  struct Vehicle {
    double depart;
    std::string id;
    std::string route;
  };
  std::vector<Vehicle> vehicles;
  for (const MatchedLine* line : by_id) {
    for (std::size_t k = 0; k < line->departures.size(); ++k) {
      vehicles.push_back({line->departures[k],
                          line->line_id() + "." + std::to_string(k),
                          line->line_id()});
    }
  }
  std::stable_sort(vehicles.begin(), vehicles.end(),
                   [](const Vehicle& a, const Vehicle& b) {
                     if (a.depart != b.depart) return a.depart < b.depart;
                     return a.id < b.id;
                   });

  std::ostringstream out;
  out << "<routes>\n";
  for (const MatchedLine* line : by_id) {
    out << "    <route id=\"" << line->line_id() << "\" edges=\"";
    for (std::size_t i = 0; i < line->route.edges.size(); ++i) {
      if (i) out << ' ';
      out << line->route.edges[i];
    }
    out << "\"/>\n";
  }
  for (const Vehicle& v : vehicles) {
    out << "    <vehicle id=\"" << v.id << "\" route=\"" << v.route
        << "\" depart=\"" << fixed2(v.depart) << "\"/>\n";
  }
  out << "</routes>\n";
  return out.str();
}

std::string emit_stops(const RoadNetwork& net,
                       const std::vector<MatchedLine>& lines,
                       const EmitterConfig& cfg) {
  check_lines(lines);

  std::vector<const MatchedLine*> by_id;
  for (const MatchedLine& line : lines) {
    by_id.push_back(&line);
  }
  std::sort(by_id.begin(), by_id.end(),
            [](const MatchedLine* a, const MatchedLine* b) {
              return a->line_id() < b->line_id();
            });

  std::ostringstream out;
  out << "<additional>\n";
  for (const MatchedLine* line : by_id) {
    for (const MatchedStop& stop : line->stops) {
      if (std::find(line->route.edges.begin(), line->route.edges.end(),
                    stop.edge_id) == line->route.edges.end()) {
        throw Error(Errc::integrity, "stop '" + stop.stop_id +
                                         "' is not on route '" +
                                         line->line_id() + "'");
      }
      const Edge& e = net.edge(stop.edge_id);
      const double start = std::max(0.0, stop.offset - cfg.platform_half_length);
      const double end =
          std::min(e.length, stop.offset + cfg.platform_half_length);
      out << "    <busStop id=\"" << stop.stop_id << "\" lane=\"" << stop.edge_id
          << "_0\" startPos=\"" << fixed2(start) << "\" endPos=\""
          << fixed2(end) << "\"/>\n";
    }
  }
  out << "</additional>\n";
  return out.str();
}

std::vector<MatchedLine> parse_routes(std::string_view document) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream stream{std::string(document)};
  try {
    pt::read_xml(stream, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(Errc::parse, "malformed route document at line " +
                                 std::to_string(e.line()) + ": " + e.message());
  }
  const auto root = tree.get_child_optional("routes");
  if (!root) {
    throw Error(Errc::parse, "document root is not <routes>");
  }

  std::vector<MatchedLine> lines;
  std::map<std::string, std::size_t> index;
  for (const auto& [name, element] : *root) {
    if (name == "route") {
      const auto id = element.get_optional<std::string>("<xmlattr>.id");
      const auto edges = element.get_optional<std::string>("<xmlattr>.edges");
      if (!id || !edges) {
        throw Error(Errc::parse, "<route> missing id or edges");
      }
      if (index.count(*id)) {
        throw Error(Errc::duplicate_id, "duplicate route id '" + *id + "'");
      }
      MatchedLine line;
      line.route.line_id = *id;
      std::istringstream edge_stream(*edges);
      std::string edge;
      while (edge_stream >> edge) {
        line.route.edges.push_back(edge);
      }
      if (line.route.edges.empty()) {
        throw Error(Errc::integrity, "route '" + *id + "' has no edges");
      }
      index.emplace(*id, lines.size());
      lines.push_back(std::move(line));
    } else if (name == "vehicle") {
      const auto route = element.get_optional<std::string>("<xmlattr>.route");
      const auto depart = element.get_optional<std::string>("<xmlattr>.depart");
      if (!route || !depart) {
        throw Error(Errc::parse, "<vehicle> missing route or depart");
      }
      const auto it = index.find(*route);
      if (it == index.end()) {
        throw Error(Errc::integrity,
                    "vehicle references undefined route '" + *route + "'");
      }
      try {
        lines[it->second].departures.push_back(std::stod(*depart));
      } catch (const std::exception&) {
        throw Error(Errc::parse, "bad depart value '" + *depart + "'");
      }
    }
  }
  for (MatchedLine& line : lines) {
    std::sort(line.departures.begin(), line.departures.end());
  }
  return lines;
}

}  // namespace emms
