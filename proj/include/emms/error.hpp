#ifndef EMMS_ERROR_HPP
#define EMMS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace emms {

enum class Errc {
  invalid_coordinate,
  insufficient_points,
  degenerate_segment,
  parse,
  integrity,
  empty_network,
  unknown_edge,
  no_candidate,
  no_oriented_candidate,
  unmatchable_route,
  broken_route,
  duplicate_id,
  pairing,
  grid,
  order,
  empty_sample,
  invalid_config,
  io,
};

const char* to_string(Errc code);

/// All failures raised by the library carry one of the codes above so
/// callers can branch on the failure kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_coordinate: return "invalid-coordinate";
    case Errc::insufficient_points: return "insufficient-points";
    case Errc::degenerate_segment: return "degenerate-segment";
    case Errc::parse: return "parse";
    case Errc::integrity: return "integrity";
    case Errc::empty_network: return "empty-network";
    case Errc::unknown_edge: return "unknown-edge";
    case Errc::no_candidate: return "no-candidate";
    case Errc::no_oriented_candidate: return "no-oriented-candidate";
    case Errc::unmatchable_route: return "unmatchable-route";
    case Errc::broken_route: return "broken-route";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::pairing: return "pairing";
    case Errc::grid: return "grid";
    case Errc::order: return "order";
    case Errc::empty_sample: return "empty-sample";
    case Errc::invalid_config: return "invalid-config";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace emms

#endif  // EMMS_ERROR_HPP
