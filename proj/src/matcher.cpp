#include "emms/matcher.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

namespace emms {

namespace {

void check_config(const MatcherConfig& cfg) {
  if (!(cfg.radius > 0.0)) {
    throw Error(Errc::invalid_config, "matcher radius must be positive");
  }
  if (cfg.densify_passes < 0 || cfg.max_consecutive_gaps < 0) {
    throw Error(Errc::invalid_config, "matcher counts must be non-negative");
  }
}

const char* decision_name(PointDecision::Kind kind) {
  switch (kind) {
    case PointDecision::Kind::skipped: return "skipped";
    case PointDecision::Kind::first: return "first";
    case PointDecision::Kind::advance: return "advance";
    case PointDecision::Kind::stay: return "stay";
    case PointDecision::Kind::gap: return "gap";
  }
  return "?";
}

}  // namespace

void validate_route(const RoadNetwork& net, const MatchedRoute& route) {
  if (route.edges.empty()) {
    throw Error(Errc::integrity, "matched route has no edges");
  }
  for (std::size_t i = 0; i + 1 < route.edges.size(); ++i) {
    const Edge& a = net.edge(route.edges[i]);
    const Edge& b = net.edge(route.edges[i + 1]);
    if (a.id == b.id) {
      throw Error(Errc::integrity, "immediate repetition of edge '" + a.id + "'");
    }
    if (a.to != b.from) {
      throw Error(Errc::integrity,
                  "edges '" + a.id + "' and '" + b.id + "' are not adjacent");
    }
    if (!connection_allowed(net, a.id, b.id)) {
      throw Error(Errc::integrity, "no connection registered from '" + a.id +
                                       "' to '" + b.id + "'");
    }
  }
  net.edge(route.edges.back());
}

namespace {
SpatialGrid make_grid(const RoadNetwork& net, const MatcherConfig& cfg) {
  check_config(cfg);
  return SpatialGrid(net, cfg.radius, cfg.geometry);
}
}  // namespace

Matcher::Matcher(const RoadNetwork& net, MatcherConfig cfg)
    : net_(net), cfg_(cfg), grid_(make_grid(net, cfg)) {}

std::string Matcher::match_first_edge(const CartPoint& p1,
                                      const CartPoint& p2) const {
  if (p1 == p2) {
    throw Error(Errc::invalid_config,
                "first-edge matching needs two distinct points");
  }
  const auto candidates = grid_.candidates(p1);
  if (candidates.empty()) {
    throw Error(Errc::no_candidate, "no candidate edge within radius");
  }
  for (const CandidateEdge& c : candidates) {
    const Edge& e = net_.edge(c.edge_id);
    const CartPoint& from_pos = net_.edge_from_pos(e);
    const CartPoint& to_pos = net_.edge_to_pos(e);
    const double p1_to = distance(p1, to_pos);
    const double p2_to = distance(p2, to_pos);
    const double p1_from = distance(p1, from_pos);
    const double p2_from = distance(p2, from_pos);
    // Case 1: the motion approaches the destination node.
    if (p2_to < p1_to) {
      return e.id;
    }
    // Case 2: p1 already near the exit and p2 past it. Requiring p2 to
    // recede from the origin node as well rejects the reversed twin of the
    // true edge, which the two distance tests alone cannot distinguish.
    if (p1_to < p1_from && p2_to > p1_to && p2_from >= p1_from) {
      return e.id;
    }
  }
  throw Error(Errc::no_oriented_candidate,
              "no candidate matches the direction of travel");
}

NextEdge Matcher::match_next_edge(const std::string& prev_edge,
                                  const CartPoint& p) const {
  const Edge& prev = net_.edge(prev_edge);
  const auto candidates = grid_.candidates(p);
  if (candidates.empty()) {
    return {NextEdge::Kind::gap, {}};
  }
  // Stay put while no candidate is strictly nearer than the current edge:
  // the reversed twin of a two-way street shares the chord, and every chord
  // through a junction ties at a point on it, so ties (up to projection
  // round-trip noise) must not evict the current edge.
  constexpr double kTieTolerance = 1e-6;
  for (const CandidateEdge& c : candidates) {
    if (c.edge_id == prev_edge) {
      if (c.distance <= candidates.front().distance + kTieTolerance) {
        return {NextEdge::Kind::stay, prev_edge};
      }
      break;
    }
  }
  for (const CandidateEdge& c : candidates) {
    if (net_.edge(c.edge_id).from == prev.to &&
        connection_allowed(net_, prev_edge, c.edge_id)) {
      return {NextEdge::Kind::advanced, c.edge_id};
    }
  }
  return {NextEdge::Kind::gap, {}};
}

MatchedRoute Matcher::match_route(const LineSpec& line,
                                  const ProjectionContext& ctx,
                                  MatchTrace* trace) const {
  validate(line);

  std::vector<CartPoint> points;
  points.reserve(line.itinerary.size());
  for (const GeoPoint& g : line.itinerary) {
    points.push_back(to_cartesian(g, ctx));
  }
  for (int pass = 0; pass < cfg_.densify_passes; ++pass) {
    points = densify(points);
  }

  const auto record = [&](const CartPoint& p, PointDecision::Kind kind,
                          const std::string& edge_id = {}) {
    if (trace) {
      trace->points.push_back({p, kind, edge_id});
    }
  };

  MatchedRoute route;
  route.line_id = line.line_id;

  std::size_t next_point = 0;
  for (std::size_t i = 0; i + 1 < points.size() && route.edges.empty(); ++i) {
    if (points[i] == points[i + 1]) {
      record(points[i], PointDecision::Kind::skipped);
      continue;
    }
    try {
      const std::string first = match_first_edge(points[i], points[i + 1]);
      route.edges.push_back(first);
      record(points[i], PointDecision::Kind::first, first);
      next_point = i + 1;
    } catch (const Error& e) {
      if (e.code() != Errc::no_candidate &&
          e.code() != Errc::no_oriented_candidate) {
        throw;
      }
      record(points[i], PointDecision::Kind::skipped);
    }
  }
  if (route.edges.empty()) {
    throw Error(Errc::unmatchable_route,
                "line '" + line.line_id + "': no pair of positioning points "
                "resolves a first edge");
  }

  int gap_run = 0;
  for (std::size_t i = next_point; i < points.size(); ++i) {
    const NextEdge step = match_next_edge(route.edges.back(), points[i]);
    switch (step.kind) {
      case NextEdge::Kind::stay:
        record(points[i], PointDecision::Kind::stay, route.edges.back());
        gap_run = 0;
        break;
      case NextEdge::Kind::advanced:
        route.edges.push_back(step.edge_id);
        record(points[i], PointDecision::Kind::advance, step.edge_id);
        gap_run = 0;
        break;
      case NextEdge::Kind::gap:
        record(points[i], PointDecision::Kind::gap);
        ++route.gap_count;
        if (++gap_run > cfg_.max_consecutive_gaps) {
          throw Error(Errc::broken_route,
                      "line '" + line.line_id + "': " +
                          std::to_string(gap_run) +
                          " consecutive positioning points without a viable "
                          "edge");
        }
        break;
    }
  }
  return route;
}

StopMatchReport Matcher::match_stops(const MatchedRoute& route,
                                     const std::vector<StopSpec>& stops,
                                     const ProjectionContext& ctx) const {
  validate_route(net_, route);
  const std::unordered_set<std::string> on_route(route.edges.begin(),
                                                 route.edges.end());
  StopMatchReport report;
  for (const StopSpec& stop : stops) {
    const CartPoint p = to_cartesian(stop.pos, ctx);
    const Edge* chosen = nullptr;
    for (const CandidateEdge& c : grid_.candidates(p)) {
      if (on_route.count(c.edge_id)) {
        chosen = &net_.edge(c.edge_id);
        break;
      }
    }
    if (!chosen) {
      report.unmatched.push_back(stop.id);
      continue;
    }
    const CartPoint& a = net_.edge_from_pos(*chosen);
    const CartPoint& b = net_.edge_to_pos(*chosen);
    // Chord offset; clamped in case the declared edge length is shorter
    // than the chord.
    const double offset =
        a == b ? 0.0
               : std::min(project_onto_segment(p, a, b).offset, chosen->length);
    report.matched.push_back({stop.id, chosen->id, offset});
  }
  return report;
}

std::string write_conference(const std::string& line_id,
                             const MatcherConfig& cfg, const MatchTrace& trace,
                             const MatchedRoute& route) {
  nlohmann::json doc;
  doc["line_id"] = line_id;
  doc["radius"] = cfg.radius;
  doc["densify_passes"] = cfg.densify_passes;
  nlohmann::json points = nlohmann::json::array();
  for (const PointDecision& d : trace.points) {
    nlohmann::json p;
    p["x"] = d.point.x;
    p["y"] = d.point.y;
    p["decision"] = decision_name(d.kind);
    if (!d.edge_id.empty()) {
      p["edge"] = d.edge_id;
    }
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  doc["chain"] = route.edges;
  doc["gap_count"] = route.gap_count;
  return doc.dump(2) + "\n";
}

}  // namespace emms
