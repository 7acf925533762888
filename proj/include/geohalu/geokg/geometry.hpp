#pragma once

#include <span>
#include <vector>

namespace geohalu::geokg {

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p);

// Throws ValidationError if p is not finite or out of range.
void validate_point(const GeoPoint& p);

// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

// Ray-casting parity test in the lon/lat plane. Points on the boundary are
// inside. `ring` is an open ring (closing vertex implied). Throws
// ValidationError for rings with fewer than 3 vertices or zero planar area.
bool point_in_polygon(const GeoPoint& p, std::span<const GeoPoint> ring);

// Sum of haversine segment lengths. Throws for fewer than 2 points.
double polyline_length(std::span<const GeoPoint> path);

// Planar area centroid of the ring in lon/lat degrees.
GeoPoint polygon_centroid(std::span<const GeoPoint> ring);

// Square meters: shoelace formula after an equirectangular projection about
// the polygon centroid. Throws for fewer than 3 points.
double polygon_area(std::span<const GeoPoint> ring);

// Signed shoelace area in squared degrees (lon/lat plane).
double planar_signed_area_deg2(std::span<const GeoPoint> ring);

// Segments [a,b] and [c,d] in the lon/lat plane intersect properly or touch.
bool segments_intersect(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c,
                        const GeoPoint& d);

// Meters from p to segment [a,b], measured in a local equirectangular frame
// centered on p.
double point_segment_distance(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b);

// Minimum over ring vertices and path segments of point_segment_distance.
double ring_to_path_distance(std::span<const GeoPoint> ring, std::span<const GeoPoint> path);

// Any two path segments of `a` and `b` intersect or touch.
bool paths_intersect(std::span<const GeoPoint> a, std::span<const GeoPoint> b);

// No two non-adjacent edges of the ring intersect and adjacent edges only
// share their common vertex.
bool is_simple_polygon(std::span<const GeoPoint> ring);

}  // namespace geohalu::geokg
