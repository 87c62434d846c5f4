#ifndef EMMS_CONTACTS_HPP
#define EMMS_CONTACTS_HPP

#include <map>
#include <string>
#include <vector>

#include "emms/replay.hpp"

namespace emms {

struct AnalysisConfig {
  double tx_range = 150.0;          // contact threshold, meters
  double perimeter_radius = 2000.0; // density perimeter about the reference
  CartPoint reference;              // terminal position
  double arrival_threshold = 50.0;  // "arrived" distance for travel times
};

/// Undirected proximity graph of one frame: neighbors within the
/// transmission range, boundary inclusive. Symmetric and irreflexive.
struct FrameGraph {
  double t = 0.0;
  std::map<std::string, std::vector<std::string>> neighbors;

  int degree(const std::string& vehicle) const {
    const auto it = neighbors.find(vehicle);
    return it == neighbors.end() ? 0 : static_cast<int>(it->second.size());
  }
};

FrameGraph adjacency(const TraceFrame& frame, double tx_range);

struct FrameCount {
  double t = 0.0;
  int count = 0;
};

/// Vehicles with at least one neighbor, per frame.
std::vector<FrameCount> total_connected(const std::vector<TraceFrame>& frames,
                                        double tx_range);

struct DegreeSample {
  double t = 0.0;
  std::string vehicle_id;
  int degree = 0;
};

/// Per-frame degree of every vehicle that has at least one neighbor.
std::vector<DegreeSample> connectivity_degrees(
    const std::vector<TraceFrame>& frames, double tx_range);

/// Maximal connected / disconnected runs per vehicle. A contact spans from
/// the first connected sample to the first disconnected one; an
/// inter-contact from that interruption to the reestablishment sample.
/// Runs cut off by the end of the vehicle's observation are flagged
/// censored; disconnected runs preceding any contact are not reported.
struct ContactInterval {
  enum class Kind { contact, inter_contact };
  std::string vehicle_id;
  Kind kind = Kind::contact;
  double start = 0.0;
  double end = 0.0;
  bool censored = false;

  double duration() const { return end - start; }
};

/// Frames must lie on a uniform sample grid; instants where a frame is
/// missing count as empty frames. Incommensurable spacings raise a grid
/// error.
std::vector<ContactInterval> contact_intervals(
    const std::vector<TraceFrame>& frames, double tx_range);

/// Vehicles within perimeter_radius of the reference, per frame.
std::vector<FrameCount> vehicles_in_perimeter(
    const std::vector<TraceFrame>& frames, const AnalysisConfig& cfg);

struct TravelTime {
  std::string vehicle_id;
  double perimeter_entry = 0.0;  // first sample inside the perimeter
  double duration = 0.0;         // until first sample inside the threshold
};

struct TravelTimeReport {
  std::vector<TravelTime> arrived;
  std::vector<std::string> not_arrived;    // entered, never reached threshold
  std::vector<std::string> never_entered;  // never inside the perimeter
};

TravelTimeReport travel_times(const std::vector<TraceFrame>& frames,
                              const AnalysisConfig& cfg);

struct CompatibilityReport {
  std::size_t pairs = 0;
  std::size_t within = 0;
  double percentage = 0.0;
};

/// Share of trips whose simulated duration falls within tolerance x real of
/// the real duration. Vectors are paired by index; length mismatch raises a
/// pairing error.
CompatibilityReport compatibility(const std::vector<double>& real_durations,
                                  const std::vector<double>& simulated_durations,
                                  double tolerance = 0.2);

std::string write_compatibility_json(const CompatibilityReport& report);

/// All five metrics of one (range, perimeter) configuration.
struct MetricsBundle {
  std::vector<FrameCount> total_connected;
  std::vector<DegreeSample> degrees;
  std::vector<ContactInterval> intervals;
  std::vector<FrameCount> in_perimeter;
  TravelTimeReport travel;
};

MetricsBundle analyze_trace(const std::vector<TraceFrame>& frames,
                            const AnalysisConfig& cfg);

/// Metric CSV: `metric,vehicle_id,t_or_start,value`, two fractional
/// digits. Frame-level metrics leave vehicle_id empty; censored intervals
/// carry a `_censored` metric suffix.
std::string write_metrics_csv(const MetricsBundle& metrics);

}  // namespace emms

#endif  // EMMS_CONTACTS_HPP
