#ifndef EMMS_MATCHER_HPP
#define EMMS_MATCHER_HPP

#include <string>
#include <vector>

#include "emms/line_spec.hpp"
#include "emms/network.hpp"

namespace emms {

struct MatcherConfig {
  double radius = 15.0;        // candidate search radius, meters
  int densify_passes = 1;      // midpoint-densification repetitions
  int max_consecutive_gaps = 5;
  MatchGeometry geometry = MatchGeometry::chord;
};

/// Chained edge list representing one itinerary. Consecutive edges always
/// satisfy physical adjacency and connection permission; the same edge id
/// never appears twice in a row.
struct MatchedRoute {
  std::string line_id;
  std::vector<std::string> edges;
  int gap_count = 0;  // positioning points skipped during chaining
};

/// Checks the MatchedRoute invariants against a network; throws integrity
/// on violation.
void validate_route(const RoadNetwork& net, const MatchedRoute& route);

struct MatchedStop {
  std::string stop_id;
  std::string edge_id;
  double offset = 0.0;  // meters from the edge's from-node
};

struct StopMatchReport {
  std::vector<MatchedStop> matched;    // input order preserved
  std::vector<std::string> unmatched;  // stop ids with no route edge in range
};

struct NextEdge {
  enum class Kind { advanced, stay, gap };
  Kind kind = Kind::gap;
  std::string edge_id;  // set when kind == advanced
};

/// Per-point record backing the conference document.
struct PointDecision {
  enum class Kind { skipped, first, advance, stay, gap };
  CartPoint point;
  Kind kind = Kind::gap;
  std::string edge_id;  // set for first/advance/stay
};

struct MatchTrace {
  std::vector<PointDecision> points;
};

class Matcher {
 public:
  Matcher(const RoadNetwork& net, MatcherConfig cfg = {});

  /// Selects the first edge of a chain from the two leading positioning
  /// points. Candidates of p1 are tried in ascending distance; a candidate
  /// is accepted when the points approach its to-node (case 1), or when p1
  /// already sits near the to-node and p2 recedes from both endpoints
  /// (case 2, the past-the-end situation).
  std::string match_first_edge(const CartPoint& p1, const CartPoint& p2) const;

  /// Matches one positioning point given the previously matched edge.
  /// Returns stay when prev_edge is still the nearest candidate (ties in
  /// prev_edge's favor), the accepted successor when a candidate passes the
  /// physical and logical checks, and gap otherwise.
  NextEdge match_next_edge(const std::string& prev_edge,
                           const CartPoint& p) const;

  /// Full itinerary pipeline: project, densify, first-edge scan, then
  /// point-by-point chaining. `trace`, when given, receives the per-point
  /// decisions for the conference document.
  MatchedRoute match_route(const LineSpec& line, const ProjectionContext& ctx,
                           MatchTrace* trace = nullptr) const;

  /// Places stops on route edges: candidates within the radius intersected
  /// with the chain; offset is the projection onto the edge chord. Stops
  /// with no correspondence are reported, never fatal.
  StopMatchReport match_stops(const MatchedRoute& route,
                              const std::vector<StopSpec>& stops,
                              const ProjectionContext& ctx) const;

  const MatcherConfig& config() const { return cfg_; }
  const SpatialGrid& grid() const { return grid_; }

 private:
  const RoadNetwork& net_;
  MatcherConfig cfg_;
  SpatialGrid grid_;
};

/// Conference document: densified points with their decisions plus the
/// final chain, serialized as JSON.
std::string write_conference(const std::string& line_id,
                             const MatcherConfig& cfg, const MatchTrace& trace,
                             const MatchedRoute& route);

}  // namespace emms

#endif  // EMMS_MATCHER_HPP
