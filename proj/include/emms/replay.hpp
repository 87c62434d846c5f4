#ifndef EMMS_REPLAY_HPP
#define EMMS_REPLAY_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "emms/emitter.hpp"

namespace emms {

/// Replay parameters. The replay is a deterministic substitute for a
/// microscopic traffic simulator: constant edge speeds, fixed dwell at
/// stops, no interaction between vehicles.
struct SimConfig {
  double sample_interval = 3.0;  // seconds between frames
  double dwell_time = 20.0;      // seconds held at each stop
  double start = 0.0;            // window start, seconds
  double end = 0.0;              // window end, seconds
  double speed_factor = 1.0;     // scales edge speed limits, in (0, 1]
};

/// One sampling instant: every active vehicle's planar position.
struct TraceFrame {
  double t = 0.0;
  std::map<std::string, CartPoint> positions;
};

/// Advances each departed bus along its matched chain and samples all
/// positions every sample_interval. A vehicle spawns at its departure time
/// at offset 0 of its first edge, drives at speed_factor x edge speed,
/// dwells dwell_time at each stop offset, carries surplus distance across
/// edge boundaries, and vanishes once past the final edge. Only departures
/// inside the window are replayed. Positions interpolate along edge chords.
std::vector<TraceFrame> simulate(const RoadNetwork& net,
                                 const std::vector<MatchedLine>& lines,
                                 const SimConfig& cfg);

/// Trace document: header `t,vehicle_id,x,y`, rows sorted by (t,
/// vehicle_id), two fractional digits, LF line endings. Frames with no
/// active vehicle produce no rows.
std::string write_trace(const std::vector<TraceFrame>& frames);

/// Inverse of write_trace. Malformed rows raise parse errors carrying the
/// 1-based line number; a decreasing t column raises an order error.
std::vector<TraceFrame> read_trace(std::string_view document);

std::vector<TraceFrame> load_trace(const std::string& path);

}  // namespace emms

#endif  // EMMS_REPLAY_HPP
