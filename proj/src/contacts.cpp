#include "emms/contacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace emms {

namespace {

void check_range(double tx_range) {
  if (!(tx_range > 0.0)) {
    throw Error(Errc::invalid_config, "transmission range must be positive");
  }
}

/// Greatest common divisor of the frame spacings, to tolerance. This lets
/// traces whose empty frames were omitted keep a well-defined grid: the
/// spacings are then differing multiples of the sample interval.
double grid_interval(const std::vector<TraceFrame>& frames) {
  constexpr double kTol = 1e-6;
  constexpr double kMinStep = 1e-3;
  double step = 0.0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    double diff = frames[i].t - frames[i - 1].t;
    if (diff <= kTol) {
      throw Error(Errc::grid, "frame times must strictly increase");
    }
    if (step == 0.0) {
      step = diff;
      continue;
    }
    while (diff > kTol) {
      if (diff < step) {
        std::swap(diff, step);
      }
      diff = std::fmod(diff, step);
    }
  }
  if (step != 0.0 && step < kMinStep) {
    throw Error(Errc::grid, "frame times are not on a uniform grid");
  }
  return step;
}

}  // namespace

FrameGraph adjacency(const TraceFrame& frame, double tx_range) {
  check_range(tx_range);
  FrameGraph graph;
  graph.t = frame.t;
  for (const auto& [id, pos] : frame.positions) {
    graph.neighbors[id];
    for (const auto& [other_id, other_pos] : frame.positions) {
      if (other_id == id) {
        continue;
      }
      if (distance(pos, other_pos) <= tx_range) {
        graph.neighbors[id].push_back(other_id);
      }
    }
  }
  return graph;
}

std::vector<FrameCount> total_connected(const std::vector<TraceFrame>& frames,
                                        double tx_range) {
  std::vector<FrameCount> counts;
  counts.reserve(frames.size());
  for (const TraceFrame& frame : frames) {
    const FrameGraph graph = adjacency(frame, tx_range);
    int connected = 0;
    for (const auto& [id, neighbors] : graph.neighbors) {
      if (!neighbors.empty()) {
        ++connected;
      }
    }
    counts.push_back({frame.t, connected});
  }
  return counts;
}

std::vector<DegreeSample> connectivity_degrees(
    const std::vector<TraceFrame>& frames, double tx_range) {
  std::vector<DegreeSample> samples;
  for (const TraceFrame& frame : frames) {
    const FrameGraph graph = adjacency(frame, tx_range);
    for (const auto& [id, neighbors] : graph.neighbors) {
      if (!neighbors.empty()) {
        samples.push_back({frame.t, id, static_cast<int>(neighbors.size())});
      }
    }
  }
  return samples;
}

std::vector<ContactInterval> contact_intervals(
    const std::vector<TraceFrame>& frames, double tx_range) {
  check_range(tx_range);
  std::vector<ContactInterval> intervals;
  if (frames.empty()) {
    return intervals;
  }
  const double step = grid_interval(frames);
  const double t0 = frames.front().t;

  // Index frames by grid slot; slots without a frame are empty frames.
  const auto slot_of = [&](double t) {
    return step == 0.0
               ? 0LL
               : static_cast<long long>(std::llround((t - t0) / step));
  };

  std::map<std::string, std::pair<long long, long long>> spans;
  std::map<std::string, std::set<long long>> connected_slots;
  for (const TraceFrame& frame : frames) {
    const long long slot = slot_of(frame.t);
    const FrameGraph graph = adjacency(frame, tx_range);
    for (const auto& [id, neighbors] : graph.neighbors) {
      const auto [it, inserted] = spans.emplace(id, std::make_pair(slot, slot));
      if (!inserted) {
        it->second.first = std::min(it->second.first, slot);
        it->second.second = std::max(it->second.second, slot);
      }
      if (!neighbors.empty()) {
        connected_slots[id].insert(slot);
      }
    }
  }

  for (const auto& [vehicle, span] : spans) {
    const auto& connected = connected_slots[vehicle];
    if (connected.empty()) {
      continue;  // never in contact: nothing to report
    }
    const auto at = [&](long long slot) { return connected.count(slot) > 0; };

    long long slot = span.first;
    // Disconnected lead-in precedes any contact and is not an interval.
    while (slot <= span.second && !at(slot)) {
      ++slot;
    }
    while (slot <= span.second) {
      const bool in_contact = at(slot);
      const long long run_start = slot;
      while (slot <= span.second && at(slot) == in_contact) {
        ++slot;
      }
      // `slot` is now the terminating opposite-state sample, or one slot
      // past the vehicle's span when the run was cut off (censored). Either
      // way the run of k samples measures k * step.
      ContactInterval interval;
      interval.vehicle_id = vehicle;
      interval.kind = in_contact ? ContactInterval::Kind::contact
                                 : ContactInterval::Kind::inter_contact;
      interval.start = t0 + static_cast<double>(run_start) * step;
      interval.end = t0 + static_cast<double>(slot) * step;
      interval.censored = slot > span.second;
      intervals.push_back(std::move(interval));
    }
  }
  return intervals;
}

std::vector<FrameCount> vehicles_in_perimeter(
    const std::vector<TraceFrame>& frames, const AnalysisConfig& cfg) {
  if (!(cfg.perimeter_radius > 0.0)) {
    throw Error(Errc::invalid_config, "perimeter radius must be positive");
  }
  std::vector<FrameCount> counts;
  counts.reserve(frames.size());
  for (const TraceFrame& frame : frames) {
    int inside = 0;
    for (const auto& [id, pos] : frame.positions) {
      if (distance(pos, cfg.reference) <= cfg.perimeter_radius) {
        ++inside;
      }
    }
    counts.push_back({frame.t, inside});
  }
  return counts;
}

TravelTimeReport travel_times(const std::vector<TraceFrame>& frames,
                              const AnalysisConfig& cfg) {
  if (!(cfg.perimeter_radius > 0.0) || !(cfg.arrival_threshold > 0.0)) {
    throw Error(Errc::invalid_config, "analysis distances must be positive");
  }
  struct State {
    bool entered = false;
    bool arrived = false;
    double entry_t = 0.0;
    double arrival_t = 0.0;
  };
  std::map<std::string, State> states;
  for (const TraceFrame& frame : frames) {
    for (const auto& [id, pos] : frame.positions) {
      State& state = states[id];
      if (state.arrived) {
        continue;
      }
      const double d = distance(pos, cfg.reference);
      if (!state.entered && d <= cfg.perimeter_radius) {
        state.entered = true;
        state.entry_t = frame.t;
      }
      if (state.entered && d <= cfg.arrival_threshold) {
        state.arrived = true;
        state.arrival_t = frame.t;
      }
    }
  }
  TravelTimeReport report;
  for (const auto& [id, state] : states) {
    if (state.arrived) {
      report.arrived.push_back(
          {id, state.entry_t, state.arrival_t - state.entry_t});
    } else if (state.entered) {
      report.not_arrived.push_back(id);
    } else {
      report.never_entered.push_back(id);
    }
  }
  return report;
}

CompatibilityReport compatibility(const std::vector<double>& real_durations,
                                  const std::vector<double>& simulated_durations,
                                  double tolerance) {
  if (real_durations.size() != simulated_durations.size()) {
    throw Error(Errc::pairing, "real and simulated duration counts differ");
  }
  CompatibilityReport report;
  report.pairs = real_durations.size();
  for (std::size_t i = 0; i < real_durations.size(); ++i) {
    if (std::abs(simulated_durations[i] - real_durations[i]) <=
        tolerance * real_durations[i]) {
      ++report.within;
    }
  }
  // Vacuously compatible when there is nothing to compare.
  report.percentage =
      report.pairs == 0
          ? 100.0
          : 100.0 * static_cast<double>(report.within) /
                static_cast<double>(report.pairs);
  return report;
}

std::string write_compatibility_json(const CompatibilityReport& report) {
  nlohmann::json doc;
  doc["pairs"] = report.pairs;
  doc["within"] = report.within;
  doc["percentage"] = report.percentage;
  return doc.dump(2) + "\n";
}

MetricsBundle analyze_trace(const std::vector<TraceFrame>& frames,
                            const AnalysisConfig& cfg) {
  MetricsBundle metrics;
  metrics.total_connected = total_connected(frames, cfg.tx_range);
  metrics.degrees = connectivity_degrees(frames, cfg.tx_range);
  metrics.intervals = contact_intervals(frames, cfg.tx_range);
  metrics.in_perimeter = vehicles_in_perimeter(frames, cfg);
  metrics.travel = travel_times(frames, cfg);
  return metrics;
}

std::string write_metrics_csv(const MetricsBundle& metrics) {
  std::ostringstream out;
  out << "metric,vehicle_id,t_or_start,value\n";
  char buf[160];
  const auto row = [&](const char* metric, const std::string& vehicle,
                       double t, double value) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.2f,%.2f\n", metric,
                  vehicle.c_str(), t, value);
    out << buf;
  };
  for (const FrameCount& c : metrics.total_connected) {
    row("total_connected", "", c.t, c.count);
  }
  for (const DegreeSample& s : metrics.degrees) {
    row("connectivity", s.vehicle_id, s.t, s.degree);
  }
  for (const ContactInterval& i : metrics.intervals) {
    const bool contact = i.kind == ContactInterval::Kind::contact;
    const char* metric =
        contact ? (i.censored ? "contact_censored" : "contact")
                : (i.censored ? "inter_contact_censored" : "inter_contact");
    row(metric, i.vehicle_id, i.start, i.duration());
  }
  for (const FrameCount& c : metrics.in_perimeter) {
    row("vehicles_in_perimeter", "", c.t, c.count);
  }
  for (const TravelTime& t : metrics.travel.arrived) {
    row("travel_time", t.vehicle_id, t.perimeter_entry, t.duration);
  }
  return out.str();
}

}  // namespace emms
