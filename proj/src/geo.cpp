#include "emms/geo.hpp"

#include <algorithm>
#include <cmath>

namespace emms {

namespace {
constexpr double kDegToRad = M_PI / 180.0;

void require_valid(const GeoPoint& p) {
  if (!is_valid(p)) {
    throw Error(Errc::invalid_coordinate,
                "geographic point out of range or non-finite");
  }
}

void require_valid(const CartPoint& p) {
  if (!is_valid(p)) {
    throw Error(Errc::invalid_coordinate, "planar point non-finite");
  }
}
}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

bool is_valid(const CartPoint& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

CartPoint to_cartesian(const GeoPoint& p, const ProjectionContext& ctx) {
  require_valid(p);
  require_valid(ctx.origin);
  if (!(ctx.earth_radius > 0.0)) {
    throw Error(Errc::invalid_config, "earth radius must be positive");
  }
  const double cos_lat = std::cos(ctx.origin.lat * kDegToRad);
  return {ctx.earth_radius * (p.lon - ctx.origin.lon) * kDegToRad * cos_lat,
          ctx.earth_radius * (p.lat - ctx.origin.lat) * kDegToRad};
}

GeoPoint to_geographic(const CartPoint& p, const ProjectionContext& ctx) {
  require_valid(p);
  require_valid(ctx.origin);
  if (!(ctx.earth_radius > 0.0)) {
    throw Error(Errc::invalid_config, "earth radius must be positive");
  }
  const double cos_lat = std::cos(ctx.origin.lat * kDegToRad);
  return {ctx.origin.lat + p.y / ctx.earth_radius / kDegToRad,
          ctx.origin.lon + p.x / (ctx.earth_radius * cos_lat) / kDegToRad};
}

std::vector<CartPoint> densify(const std::vector<CartPoint>& points) {
  if (points.size() < 2) {
    throw Error(Errc::insufficient_points,
                "densify requires at least two points");
  }
  std::vector<CartPoint> out;
  out.reserve(points.size() * 2 - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const CartPoint& a = points[i];
    const CartPoint& b = points[i + 1];
    out.push_back(a);
    out.push_back({(a.x + b.x) / 2.0, (a.y + b.y) / 2.0});
  }
  out.push_back(points.back());
  return out;
}

double distance(const CartPoint& a, const CartPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double point_segment_distance(const CartPoint& p, const CartPoint& a,
                              const CartPoint& b) {
  return distance(p, project_onto_segment(p, a, b).foot);
}

SegmentProjection project_onto_segment(const CartPoint& p, const CartPoint& a,
                                       const CartPoint& b) {
  require_valid(p);
  if (a == b) {
    throw Error(Errc::degenerate_segment, "segment endpoints coincide");
  }
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  const CartPoint foot{a.x + t * dx, a.y + t * dy};
  return {t * std::sqrt(len_sq), foot};
}

}  // namespace emms
