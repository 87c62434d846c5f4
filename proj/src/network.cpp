#include "emms/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace emms {

namespace {

std::string connection_key(const std::string& from, const std::string& to) {
  return from + "\x1f" + to;
}

}  // namespace

void RoadNetwork::add_node(NodeRef node) {
  if (node_index_.count(node.id)) {
    throw Error(Errc::integrity, "duplicate junction id '" + node.id + "'");
  }
  node_index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
}

void RoadNetwork::add_edge(Edge edge) {
  if (edge_index_.count(edge.id)) {
    throw Error(Errc::integrity, "duplicate edge id '" + edge.id + "'");
  }
  edge_index_.emplace(edge.id, edges_.size());
  edges_.push_back(std::move(edge));
}

void RoadNetwork::add_connection(Connection conn) {
  const std::string key = connection_key(conn.from_edge, conn.to_edge);
  if (connection_keys_.insert(key).second) {
    connections_.push_back(std::move(conn));
  }
}

void RoadNetwork::finalize(std::optional<GeoPoint> projection_origin) {
  if (projection_origin) {
    origin_ = projection_origin;
  }
  if (nodes_.empty() || edges_.empty()) {
    throw Error(Errc::empty_network, "network has no nodes or no edges");
  }
  for (const Edge& e : edges_) {
    if (e.from == e.to) {
      throw Error(Errc::integrity,
                  "edge '" + e.id + "' has identical endpoints");
    }
    if (!node_index_.count(e.from) || !node_index_.count(e.to)) {
      throw Error(Errc::integrity,
                  "edge '" + e.id + "' references an undefined junction");
    }
    if (!(e.length > 0.0)) {
      throw Error(Errc::integrity, "edge '" + e.id + "' has non-positive length");
    }
    if (!(e.speed_limit > 0.0)) {
      throw Error(Errc::integrity, "edge '" + e.id + "' has non-positive speed");
    }
    if (!e.shape.empty()) {
      if (e.shape.size() < 2) {
        throw Error(Errc::integrity,
                    "edge '" + e.id + "' shape needs at least two points");
      }
      constexpr double kShapeTolerance = 0.5;
      if (distance(e.shape.front(), edge_from_pos(e)) > kShapeTolerance ||
          distance(e.shape.back(), edge_to_pos(e)) > kShapeTolerance) {
        throw Error(Errc::integrity,
                    "edge '" + e.id + "' shape does not meet its junctions");
      }
    }
  }
  for (const Connection& c : connections_) {
    const auto from_it = edge_index_.find(c.from_edge);
    const auto to_it = edge_index_.find(c.to_edge);
    if (from_it == edge_index_.end() || to_it == edge_index_.end()) {
      throw Error(Errc::integrity, "connection " + c.from_edge + " -> " +
                                       c.to_edge +
                                       " references an undefined edge");
    }
    if (edges_[from_it->second].to != edges_[to_it->second].from) {
      throw Error(Errc::integrity, "connection " + c.from_edge + " -> " +
                                       c.to_edge +
                                       " is not physically interconnected");
    }
  }

  // The boundary anchors geography. Without a declared origin the planar
  // frame is interpreted as projected about (0, 0).
  const ProjectionContext anchor{origin_.value_or(GeoPoint{0.0, 0.0})};
  GeoPoint lo{90.0, 180.0};
  GeoPoint hi{-90.0, -180.0};
  for (const NodeRef& n : nodes_) {
    const GeoPoint g = to_geographic(n.pos, anchor);
    lo.lat = std::min(lo.lat, g.lat);
    lo.lon = std::min(lo.lon, g.lon);
    hi.lat = std::max(hi.lat, g.lat);
    hi.lon = std::max(hi.lon, g.lon);
  }
  if (lo == hi) {
    throw Error(Errc::integrity, "degenerate geographic boundary");
  }
  boundary_ = {lo, hi};
  finalized_ = true;
}

const NodeRef& RoadNetwork::node(const std::string& id) const {
  const auto it = node_index_.find(id);
  if (it == node_index_.end()) {
    throw Error(Errc::integrity, "unknown junction '" + id + "'");
  }
  return nodes_[it->second];
}

const Edge& RoadNetwork::edge(const std::string& id) const {
  const auto it = edge_index_.find(id);
  if (it == edge_index_.end()) {
    throw Error(Errc::unknown_edge, "unknown edge '" + id + "'");
  }
  return edges_[it->second];
}

bool RoadNetwork::has_edge(const std::string& id) const {
  return edge_index_.count(id) > 0;
}

const CartPoint& RoadNetwork::edge_from_pos(const Edge& e) const {
  return node(e.from).pos;
}

const CartPoint& RoadNetwork::edge_to_pos(const Edge& e) const {
  return node(e.to).pos;
}

ProjectionContext RoadNetwork::projection_context() const {
  if (origin_) {
    return ProjectionContext{*origin_};
  }
  return ProjectionContext{GeoPoint{
      (boundary_.min.lat + boundary_.max.lat) / 2.0,
      (boundary_.min.lon + boundary_.max.lon) / 2.0}};
}

bool connection_allowed(const RoadNetwork& net, const std::string& from_edge,
                        const std::string& to_edge) {
  net.edge(from_edge);
  net.edge(to_edge);
  return net.connection_keys_.count(connection_key(from_edge, to_edge)) > 0;
}

namespace {

namespace pt = boost::property_tree;

double attr_double(const pt::ptree& element, const char* element_name,
                   const char* attr) {
  const auto value =
      element.get_optional<std::string>(std::string("<xmlattr>.") + attr);
  if (!value) {
    throw Error(Errc::parse, std::string("<") + element_name +
                                 "> missing attribute '" + attr + "'");
  }
  try {
    std::size_t used = 0;
    const double parsed = std::stod(*value, &used);
    if (used != value->size() || !std::isfinite(parsed)) {
      throw std::invalid_argument(*value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw Error(Errc::parse, std::string("<") + element_name + "> attribute '" +
                                 attr + "' is not a number: '" + *value + "'");
  }
}

std::string attr_string(const pt::ptree& element, const char* element_name,
                        const char* attr) {
  const auto value =
      element.get_optional<std::string>(std::string("<xmlattr>.") + attr);
  if (!value || value->empty()) {
    throw Error(Errc::parse, std::string("<") + element_name +
                                 "> missing attribute '" + attr + "'");
  }
  return *value;
}

std::vector<CartPoint> parse_shape(const std::string& text,
                                   const std::string& edge_id) {
  std::vector<CartPoint> shape;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos) {
      throw Error(Errc::parse,
                  "edge '" + edge_id + "' has a malformed shape point");
    }
    try {
      shape.push_back({std::stod(token.substr(0, comma)),
                       std::stod(token.substr(comma + 1))});
    } catch (const std::exception&) {
      throw Error(Errc::parse,
                  "edge '" + edge_id + "' has a malformed shape point");
    }
  }
  return shape;
}

}  // namespace

RoadNetwork parse_network(std::string_view document) {
  pt::ptree tree;
  std::istringstream stream{std::string(document)};
  try {
    pt::read_xml(stream, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(Errc::parse, "malformed network document at line " +
                                 std::to_string(e.line()) + ": " + e.message());
  }
  const auto net_tree = tree.get_child_optional("net");
  if (!net_tree) {
    throw Error(Errc::parse, "document root is not <net>");
  }

  RoadNetwork net;
  std::optional<GeoPoint> origin;
  for (const auto& [name, element] : *net_tree) {
    if (name == "junction") {
      net.add_node({attr_string(element, "junction", "id"),
                    {attr_double(element, "junction", "x"),
                     attr_double(element, "junction", "y")}});
    } else if (name == "edge") {
      Edge e;
      e.id = attr_string(element, "edge", "id");
      e.from = attr_string(element, "edge", "from");
      e.to = attr_string(element, "edge", "to");
      e.speed_limit = attr_double(element, "edge", "speed");
      e.length = attr_double(element, "edge", "length");
      if (const auto shape =
              element.get_optional<std::string>("<xmlattr>.shape")) {
        e.shape = parse_shape(*shape, e.id);
      }
      net.add_edge(std::move(e));
    } else if (name == "connection") {
      net.add_connection({attr_string(element, "connection", "from"),
                          attr_string(element, "connection", "to")});
    } else if (name == "location") {
      origin = GeoPoint{attr_double(element, "location", "origLat"),
                        attr_double(element, "location", "origLon")};
      if (!is_valid(*origin)) {
        throw Error(Errc::parse, "<location> origin out of range");
      }
    }
    // Unknown elements are skipped for forward compatibility.
  }
  net.finalize(origin);
  return net;
}

RoadNetwork load_network(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(Errc::io, "cannot open network file '" + path + "'");
  }
  std::ostringstream content;
  content << file.rdbuf();
  return parse_network(content.str());
}

SpatialGrid::SpatialGrid(const RoadNetwork& net, double radius,
                         MatchGeometry geometry)
    : net_(net), radius_(radius), cell_size_(2.0 * radius),
      geometry_(geometry) {
  if (!(radius > 0.0)) {
    throw Error(Errc::invalid_config, "search radius must be positive");
  }
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const Edge& e = net.edges()[i];
    double min_x, min_y, max_x, max_y;
    if (geometry_ == MatchGeometry::polyline && !e.shape.empty()) {
      min_x = max_x = e.shape.front().x;
      min_y = max_y = e.shape.front().y;
      for (const CartPoint& p : e.shape) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
    } else {
      const CartPoint& a = net.edge_from_pos(e);
      const CartPoint& b = net.edge_to_pos(e);
      min_x = std::min(a.x, b.x);
      min_y = std::min(a.y, b.y);
      max_x = std::max(a.x, b.x);
      max_y = std::max(a.y, b.y);
    }
    const CellKey lo = cell_of(min_x, min_y);
    const CellKey hi = cell_of(max_x, max_y);
    for (long long cx = lo.cx; cx <= hi.cx; ++cx) {
      for (long long cy = lo.cy; cy <= hi.cy; ++cy) {
        cells_[{cx, cy}].push_back(i);
      }
    }
  }
}

SpatialGrid::CellKey SpatialGrid::cell_of(double x, double y) const {
  return {static_cast<long long>(std::floor(x / cell_size_)),
          static_cast<long long>(std::floor(y / cell_size_))};
}

double SpatialGrid::edge_distance(const Edge& e, const CartPoint& p) const {
  const auto segment_distance = [&](const CartPoint& a, const CartPoint& b) {
    return a == b ? distance(p, a) : point_segment_distance(p, a, b);
  };
  if (geometry_ == MatchGeometry::polyline && !e.shape.empty()) {
    double best = segment_distance(e.shape[0], e.shape[1]);
    for (std::size_t i = 1; i + 1 < e.shape.size(); ++i) {
      best = std::min(best, segment_distance(e.shape[i], e.shape[i + 1]));
    }
    return best;
  }
  return segment_distance(net_.edge_from_pos(e), net_.edge_to_pos(e));
}

std::vector<CandidateEdge> SpatialGrid::candidates(const CartPoint& p) const {
  const CellKey lo = cell_of(p.x - radius_, p.y - radius_);
  const CellKey hi = cell_of(p.x + radius_, p.y + radius_);
  std::vector<std::size_t> seen;
  for (long long cx = lo.cx; cx <= hi.cx; ++cx) {
    for (long long cy = lo.cy; cy <= hi.cy; ++cy) {
      const auto it = cells_.find({cx, cy});
      if (it != cells_.end()) {
        seen.insert(seen.end(), it->second.begin(), it->second.end());
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());

  std::vector<CandidateEdge> result;
  for (const std::size_t idx : seen) {
    const Edge& e = net_.edges()[idx];
    const double d = edge_distance(e, p);
    if (d <= radius_) {
      result.push_back({e.id, d});
    }
  }
  std::sort(result.begin(), result.end(),
            [](const CandidateEdge& a, const CandidateEdge& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.edge_id < b.edge_id;
            });
  return result;
}

std::vector<CandidateEdge> candidate_edges(const RoadNetwork& net,
                                           const CartPoint& p, double radius,
                                           MatchGeometry geometry) {
  return SpatialGrid(net, radius, geometry).candidates(p);
}

}  // namespace emms
