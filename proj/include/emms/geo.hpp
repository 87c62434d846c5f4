#ifndef EMMS_GEO_HPP
#define EMMS_GEO_HPP

#include <vector>

#include "emms/error.hpp"

namespace emms {

/// Geographic position, degrees. lat in [-90, 90], lon in [-180, 180].
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

/// Planar position, meters east (x) / north (y) of a projection origin.
struct CartPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const CartPoint&) const = default;
};

constexpr double kEarthRadiusMeters = 6'371'000.0;

/// Reference for the local equirectangular projection. All planar
/// coordinates in a scenario must share one context, otherwise positions
/// from different sources are not comparable.
struct ProjectionContext {
  GeoPoint origin;
  double earth_radius = kEarthRadiusMeters;
};

bool is_valid(const GeoPoint& p);
bool is_valid(const CartPoint& p);

/// Equirectangular projection about ctx.origin:
///   x = R * dlon_rad * cos(origin.lat), y = R * dlat_rad.
CartPoint to_cartesian(const GeoPoint& p, const ProjectionContext& ctx);

/// Closed-form inverse of to_cartesian.
GeoPoint to_geographic(const CartPoint& p, const ProjectionContext& ctx);

/// Inserts the midpoint between every consecutive pair. Output length is
/// 2n-1; endpoints and relative order are preserved.
std::vector<CartPoint> densify(const std::vector<CartPoint>& points);

double distance(const CartPoint& a, const CartPoint& b);

/// Distance from p to the closed segment ab. a == b raises
/// degenerate-segment.
double point_segment_distance(const CartPoint& p, const CartPoint& a,
                              const CartPoint& b);

struct SegmentProjection {
  double offset = 0.0;  // meters along ab from a, clamped to [0, |ab|]
  CartPoint foot;
};

SegmentProjection project_onto_segment(const CartPoint& p, const CartPoint& a,
                                       const CartPoint& b);

}  // namespace emms

#endif  // EMMS_GEO_HPP
