#ifndef EMMS_EMITTER_HPP
#define EMMS_EMITTER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "emms/matcher.hpp"

namespace emms {

/// One fully matched bus line, ready for document emission and replay.
struct MatchedLine {
  MatchedRoute route;
  std::vector<MatchedStop> stops;
  std::vector<double> departures;  // seconds of day, strictly increasing

  const std::string& line_id() const { return route.line_id; }
};

struct EmitterConfig {
  double platform_half_length = 5.0;  // meters either side of the stop point
};

/// Route document:
///   <routes>
///     <route id="LINE" edges="e1 e2 ..."/>
///     <vehicle id="LINE.k" route="LINE" depart="s.ss"/>
///   </routes>
/// Route elements sorted by line id, vehicles by (depart, id). Output is
/// byte-deterministic: two fractional digits, LF line endings.
std::string emit_routes(const std::vector<MatchedLine>& lines);

/// Stop document:
///   <additional>
///     <busStop id="STOP" lane="EDGE_0" startPos="s.ss" endPos="s.ss"/>
///   </additional>
/// One busStop per matched stop, ordered by (line id, stop order). The
/// platform spans offset +/- half-length, clamped to the edge.
std::string emit_stops(const RoadNetwork& net,
                       const std::vector<MatchedLine>& lines,
                       const EmitterConfig& cfg = {});

/// Inverse of emit_routes up to formatting: recovers line ids, edge chains,
/// and departures (stops are not part of the route document). Lines are
/// returned in document order.
std::vector<MatchedLine> parse_routes(std::string_view document);

}  // namespace emms

#endif  // EMMS_EMITTER_HPP
