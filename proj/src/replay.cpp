#include "emms/replay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace emms {

namespace {

struct Breakpoint {
  double t;
  double s;  // cumulative chain distance
};

/// Piecewise-linear distance-over-time profile of one bus run.
struct VehiclePlan {
  std::string id;
  double depart = 0.0;
  double finish = 0.0;
  std::vector<Breakpoint> timeline;
  std::vector<double> edge_start;           // cumulative distance per edge
  std::vector<const Edge*> edges;
  const RoadNetwork* net = nullptr;

  bool active_at(double t) const { return t >= depart && t < finish; }

  CartPoint position_at(double t) const {
    // Locate the timeline segment containing t.
    const auto it = std::upper_bound(
        timeline.begin(), timeline.end(), t,
        [](double value, const Breakpoint& b) { return value < b.t; });
    const Breakpoint& hi = it == timeline.end() ? timeline.back() : *it;
    const Breakpoint& lo = it == timeline.begin() ? timeline.front() : *(it - 1);
    double s = lo.s;
    if (hi.t > lo.t) {
      s += (hi.s - lo.s) * (t - lo.t) / (hi.t - lo.t);
    }
    // Map chain distance to a point on the owning edge's chord.
    auto edge_it =
        std::upper_bound(edge_start.begin(), edge_start.end(), s);
    std::size_t idx = edge_it == edge_start.begin()
                          ? 0
                          : static_cast<std::size_t>(edge_it -
                                                     edge_start.begin()) -
                                1;
    idx = std::min(idx, edges.size() - 1);
    const Edge& e = *edges[idx];
    const double fraction =
        std::clamp((s - edge_start[idx]) / e.length, 0.0, 1.0);
    const CartPoint& a = net->edge_from_pos(e);
    const CartPoint& b = net->edge_to_pos(e);
    return {a.x + fraction * (b.x - a.x), a.y + fraction * (b.y - a.y)};
  }
};

VehiclePlan build_plan(const RoadNetwork& net, const MatchedLine& line,
                       std::size_t departure_index, const SimConfig& cfg) {
  VehiclePlan plan;
  plan.id = line.line_id() + "." + std::to_string(departure_index);
  plan.depart = line.departures[departure_index];
  plan.net = &net;

  double total = 0.0;
  for (const std::string& edge_id : line.route.edges) {
    const Edge& e = net.edge(edge_id);
    plan.edges.push_back(&e);
    plan.edge_start.push_back(total);
    total += e.length;
  }

  // A stop applies at every traversal of its edge.
  std::vector<double> halts;
  for (std::size_t i = 0; i < plan.edges.size(); ++i) {
    for (const MatchedStop& stop : line.stops) {
      if (stop.edge_id == plan.edges[i]->id) {
        halts.push_back(plan.edge_start[i] +
                        std::min(stop.offset, plan.edges[i]->length));
      }
    }
  }
  std::sort(halts.begin(), halts.end());

  double t = plan.depart;
  double s = 0.0;
  std::size_t edge_idx = 0;
  plan.timeline.push_back({t, s});
  auto drive_to = [&](double target) {
    while (s < target) {
      const double edge_end =
          plan.edge_start[edge_idx] + plan.edges[edge_idx]->length;
      const double leg = std::min(target, edge_end);
      const double speed = cfg.speed_factor * plan.edges[edge_idx]->speed_limit;
      t += (leg - s) / speed;
      s = leg;
      plan.timeline.push_back({t, s});
      if (s >= edge_end && edge_idx + 1 < plan.edges.size()) {
        ++edge_idx;
      }
    }
  };
  for (const double halt : halts) {
    drive_to(halt);
    if (cfg.dwell_time > 0.0) {
      t += cfg.dwell_time;
      plan.timeline.push_back({t, s});
    }
  }
  drive_to(total);
  plan.finish = t;
  return plan;
}

}  // namespace

std::vector<TraceFrame> simulate(const RoadNetwork& net,
                                 const std::vector<MatchedLine>& lines,
                                 const SimConfig& cfg) {
  if (!(cfg.sample_interval > 0.0) || cfg.dwell_time < 0.0 ||
      !(cfg.start < cfg.end) || !(cfg.speed_factor > 0.0) ||
      cfg.speed_factor > 1.0) {
    throw Error(Errc::invalid_config, "bad replay configuration");
  }
  std::vector<VehiclePlan> plans;
  for (const MatchedLine& line : lines) {
    for (const std::string& edge_id : line.route.edges) {
      if (!net.has_edge(edge_id)) {
        throw Error(Errc::integrity, "route '" + line.line_id() +
                                         "' references edge '" + edge_id +
                                         "' absent from the network");
      }
    }
    validate_route(net, line.route);
    for (std::size_t k = 0; k < line.departures.size(); ++k) {
      const double depart = line.departures[k];
      if (depart >= cfg.start && depart <= cfg.end) {
        plans.push_back(build_plan(net, line, k, cfg));
      }
    }
  }
  std::sort(plans.begin(), plans.end(),
            [](const VehiclePlan& a, const VehiclePlan& b) {
              return a.id < b.id;
            });

  std::vector<TraceFrame> frames;
  const auto frame_count = static_cast<std::size_t>(
      std::floor((cfg.end - cfg.start) / cfg.sample_interval + 1e-9)) + 1;
  frames.reserve(frame_count);
  for (std::size_t k = 0; k < frame_count; ++k) {
    TraceFrame frame;
    frame.t = cfg.start + static_cast<double>(k) * cfg.sample_interval;
    for (const VehiclePlan& plan : plans) {
      if (plan.active_at(frame.t)) {
        frame.positions.emplace(plan.id, plan.position_at(frame.t));
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::string write_trace(const std::vector<TraceFrame>& frames) {
  std::ostringstream out;
  out << "t,vehicle_id,x,y\n";
  char buf[128];
  for (const TraceFrame& frame : frames) {
    for (const auto& [vehicle, pos] : frame.positions) {
      std::snprintf(buf, sizeof(buf), "%.2f,%s,%.2f,%.2f\n", frame.t,
                    vehicle.c_str(), pos.x, pos.y);
      out << buf;
    }
  }
  return out.str();
}

std::vector<TraceFrame> read_trace(std::string_view document) {
  std::istringstream stream{std::string(document)};
  std::string line;
  if (!std::getline(stream, line) || line != "t,vehicle_id,x,y") {
    throw Error(Errc::parse, "trace header must be 't,vehicle_id,x,y'");
  }
  std::vector<TraceFrame> frames;
  std::size_t row = 1;
  while (std::getline(stream, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    std::array<std::string, 4> fields;
    std::size_t field = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= 4) {
          throw Error(Errc::parse,
                      "row " + std::to_string(row) + ": too many fields");
        }
        fields[field++] = line.substr(begin, i - begin);
        begin = i + 1;
      }
    }
    if (field != 4 || fields[1].empty()) {
      throw Error(Errc::parse,
                  "row " + std::to_string(row) + ": expected t,vehicle_id,x,y");
    }
    double t, x, y;
    try {
      std::size_t used = 0;
      t = std::stod(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
      x = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
      y = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      throw Error(Errc::parse,
                  "row " + std::to_string(row) + ": non-numeric field");
    }
    if (!frames.empty() && t < frames.back().t) {
      throw Error(Errc::order,
                  "row " + std::to_string(row) + ": t column decreases");
    }
    if (frames.empty() || t > frames.back().t) {
      frames.push_back({t, {}});
    }
    if (!frames.back().positions.emplace(fields[1], CartPoint{x, y}).second) {
      throw Error(Errc::parse, "row " + std::to_string(row) +
                                   ": duplicate vehicle '" + fields[1] +
                                   "' at t=" + fields[0]);
    }
  }
  return frames;
}

std::vector<TraceFrame> load_trace(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(Errc::io, "cannot open trace file '" + path + "'");
  }
  std::ostringstream content;
  content << file.rdbuf();
  return read_trace(content.str());
}

}  // namespace emms
