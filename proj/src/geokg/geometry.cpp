#include "geohalu/geokg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "geohalu/error.hpp"

namespace geohalu::geokg {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kCollinearEps = 1e-14;

double cross(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int orientation(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  const double c = cross(o, a, b);
  if (std::abs(c) <= kCollinearEps) return 0;
  return c > 0 ? 1 : -1;
}

bool within_box(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  return p.lon >= std::min(a.lon, b.lon) - kCollinearEps &&
         p.lon <= std::max(a.lon, b.lon) + kCollinearEps &&
         p.lat >= std::min(a.lat, b.lat) - kCollinearEps &&
         p.lat <= std::max(a.lat, b.lat) + kCollinearEps;
}

bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  return orientation(a, b, p) == 0 && within_box(p, a, b);
}

}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

void validate_point(const GeoPoint& p) {
  if (!is_valid(p)) throw ValidationError("coordinate out of range or not finite");
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double planar_signed_area_deg2(std::span<const GeoPoint> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const GeoPoint& p = ring[i];
    const GeoPoint& q = ring[(i + 1) % ring.size()];
    twice += p.lon * q.lat - q.lon * p.lat;
  }
  return twice / 2.0;
}

bool point_in_polygon(const GeoPoint& p, std::span<const GeoPoint> ring) {
  if (ring.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  if (std::abs(planar_signed_area_deg2(ring)) <= std::numeric_limits<double>::min())
    throw ValidationError("degenerate polygon (zero area)");

  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if (on_segment(p, a, b)) return true;
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

double polyline_length(std::span<const GeoPoint> path) {
  if (path.size() < 2) throw ValidationError("polyline needs at least 2 points");
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += haversine_distance(path[i - 1], path[i]);
  return total;
}

GeoPoint polygon_centroid(std::span<const GeoPoint> ring) {
  if (ring.empty()) throw ValidationError("empty polygon");
  const double area = planar_signed_area_deg2(ring);
  if (std::abs(area) <= std::numeric_limits<double>::min()) {
    GeoPoint mean{};
    for (const auto& p : ring) {
      mean.lat += p.lat;
      mean.lon += p.lon;
    }
    mean.lat /= static_cast<double>(ring.size());
    mean.lon /= static_cast<double>(ring.size());
    return mean;
  }
  // Shift to the first vertex to limit cancellation.
  const GeoPoint o = ring[0];
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const double x0 = ring[i].lon - o.lon, y0 = ring[i].lat - o.lat;
    const GeoPoint& q = ring[(i + 1) % ring.size()];
    const double x1 = q.lon - o.lon, y1 = q.lat - o.lat;
    const double w = x0 * y1 - x1 * y0;
    cx += (x0 + x1) * w;
    cy += (y0 + y1) * w;
  }
  return GeoPoint{o.lat + cy / (6.0 * area), o.lon + cx / (6.0 * area)};
}

double polygon_area(std::span<const GeoPoint> ring) {
  if (ring.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  const GeoPoint c = polygon_centroid(ring);
  const double kx = kEarthRadiusM * kDegToRad * std::cos(c.lat * kDegToRad);
  const double ky = kEarthRadiusM * kDegToRad;
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const GeoPoint& p = ring[i];
    const GeoPoint& q = ring[(i + 1) % ring.size()];
    const double x0 = (p.lon - c.lon) * kx, y0 = (p.lat - c.lat) * ky;
    const double x1 = (q.lon - c.lon) * kx, y1 = (q.lat - c.lat) * ky;
    twice += x0 * y1 - x1 * y0;
  }
  return std::abs(twice) / 2.0;
}

bool segments_intersect(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c,
                        const GeoPoint& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within_box(c, a, b)) return true;
  if (o2 == 0 && within_box(d, a, b)) return true;
  if (o3 == 0 && within_box(a, c, d)) return true;
  if (o4 == 0 && within_box(b, c, d)) return true;
  return false;
}

double point_segment_distance(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double kx = kEarthRadiusM * kDegToRad * std::cos(p.lat * kDegToRad);
  const double ky = kEarthRadiusM * kDegToRad;
  const double ax = (a.lon - p.lon) * kx, ay = (a.lat - p.lat) * ky;
  const double bx = (b.lon - p.lon) * kx, by = (b.lat - p.lat) * ky;
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(-(ax * dx + ay * dy) / len2, 0.0, 1.0);
  const double cx = ax + t * dx, cy = ay + t * dy;
  return std::hypot(cx, cy);
}

double ring_to_path_distance(std::span<const GeoPoint> ring, std::span<const GeoPoint> path) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : ring) {
    if (path.size() == 1) {
      best = std::min(best, haversine_distance(v, path[0]));
      continue;
    }
    for (std::size_t i = 1; i < path.size(); ++i)
      best = std::min(best, point_segment_distance(v, path[i - 1], path[i]));
  }
  return best;
}

bool paths_intersect(std::span<const GeoPoint> a, std::span<const GeoPoint> b) {
  for (std::size_t i = 1; i < a.size(); ++i)
    for (std::size_t j = 1; j < b.size(); ++j)
      if (segments_intersect(a[i - 1], a[i], b[j - 1], b[j])) return true;
  return false;
}

bool is_simple_polygon(std::span<const GeoPoint> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const GeoPoint& c = ring[j];
      const GeoPoint& d = ring[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only share their common vertex: reject folds
        // where one edge doubles back over the other.
        const GeoPoint& shared = (j == i + 1) ? b : a;
        const GeoPoint& far1 = (j == i + 1) ? a : b;
        const GeoPoint& far2 = (j == i + 1) ? d : c;
        if (orientation(shared, far1, far2) == 0 &&
            (on_segment(far2, shared, far1) || on_segment(far1, shared, far2)))
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

}  // namespace geohalu::geokg
