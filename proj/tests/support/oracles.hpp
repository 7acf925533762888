#pragma once

// Independent reference computations used as test oracles. None of these
// call into the geometry module they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "geohalu/geokg/entities.hpp"

namespace geohalu::oracle {

using geokg::GeoPoint;

inline constexpr double kR = 6'371'000.0;

inline std::array<double, 3> unit_vector(const GeoPoint& p) {
  const double la = p.lat * std::numbers::pi / 180.0, lo = p.lon * std::numbers::pi / 180.0;
  return {std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
}

inline double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Great-circle distance from the 3-D chord: d = 2 R asin(|u - v| / 2).
inline double chord_distance(const GeoPoint& a, const GeoPoint& b) {
  const auto u = unit_vector(a), v = unit_vector(b);
  const double c = std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                             (u[2] - v[2]) * (u[2] - v[2]));
  return 2.0 * kR * std::asin(std::min(1.0, c / 2.0));
}

// Geodesic polygon area on the sphere: fan triangulation from the first
// vertex, each triangle's spherical excess from
// tan(E/2) = |a.(b x c)| / (1 + a.b + b.c + c.a).
inline double spherical_area(const std::vector<GeoPoint>& ring) {
  double total = 0.0;
  const auto a = unit_vector(ring[0]);
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    const auto b = unit_vector(ring[i]), c = unit_vector(ring[i + 1]);
    const double num = dot(a, cross(b, c));
    const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    total += 2.0 * std::atan2(num, den);
  }
  return std::abs(total) * kR * kR;
}

// Winding-number containment in the lon/lat plane; points on an edge count
// as inside.
inline bool contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) {
  const std::size_t n = ring.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % n];
    const double cr = (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
    const bool on_segment = std::abs(cr) < 1e-15 && p.lon >= std::min(a.lon, b.lon) &&
                            p.lon <= std::max(a.lon, b.lon) && p.lat >= std::min(a.lat, b.lat) &&
                            p.lat <= std::max(a.lat, b.lat);
    if (on_segment) return true;
    if (a.lat <= p.lat) {
      if (b.lat > p.lat && cr > 0) ++winding;
    } else if (b.lat <= p.lat && cr < 0) {
      --winding;
    }
  }
  return winding != 0;
}

// Vertex-average of the ring; equals the area centroid for the rectangles
// and regular polygons the oracle tests use.
inline GeoPoint vertex_mean(const std::vector<GeoPoint>& ring) {
  GeoPoint c{0.0, 0.0};
  for (const auto& p : ring) {
    c.lat += p.lat;
    c.lon += p.lon;
  }
  c.lat /= static_cast<double>(ring.size());
  c.lon /= static_cast<double>(ring.size());
  return c;
}

// Distance from p to segment [a, b] by dense sampling along the segment.
inline double sampled_segment_distance(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b,
                                       int samples = 4000) {
  double best = chord_distance(p, a);
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    best = std::min(best, chord_distance(p, {a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon)}));
  }
  return best;
}

inline bool segments_cross(const GeoPoint& p1, const GeoPoint& p2, const GeoPoint& p3, const GeoPoint& p4) {
  auto orient = [](const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    const double v = (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
    return (v > 0) - (v < 0);
  };
  auto on = [](const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    return std::min(a.lon, b.lon) <= c.lon && c.lon <= std::max(a.lon, b.lon) && std::min(a.lat, b.lat) <= c.lat &&
           c.lat <= std::max(a.lat, b.lat);
  };
  const int d1 = orient(p3, p4, p1), d2 = orient(p3, p4, p2), d3 = orient(p1, p2, p3), d4 = orient(p1, p2, p4);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  return (d1 == 0 && on(p3, p4, p1)) || (d2 == 0 && on(p3, p4, p2)) || (d3 == 0 && on(p1, p2, p3)) ||
         (d4 == 0 && on(p1, p2, p4));
}

// Every relation by exhaustive pair enumeration with the oracle geometry
// above. Symmetric kinds are emitted once with head < tail.
inline std::set<geokg::RelationEdge> brute_force_relations(const geokg::EntitySet& s,
                                                          const geokg::RegionThresholds& t) {
  using geokg::RelationKind;
  std::set<geokg::RelationEdge> out;
  auto sym = [&](const std::string& a, RelationKind k, const std::string& b) {
    out.insert(a < b ? geokg::RelationEdge{a, k, b} : geokg::RelationEdge{b, k, a});
  };
  for (const auto& p : s.pois)
    for (const auto& a : s.aois)
      if (contains(a.boundary, p.location)) out.insert({p.id, RelationKind::PoiLocateAtAoi, a.id});
  for (std::size_t i = 0; i < s.pois.size(); ++i)
    for (std::size_t j = i + 1; j < s.pois.size(); ++j)
      if (chord_distance(s.pois[i].location, s.pois[j].location) <= t.near_poi_m)
        sym(s.pois[i].id, RelationKind::PoiNearPoi, s.pois[j].id);
  for (std::size_t i = 0; i < s.aois.size(); ++i)
    for (std::size_t j = i + 1; j < s.aois.size(); ++j)
      if (chord_distance(vertex_mean(s.aois[i].boundary), vertex_mean(s.aois[j].boundary)) <= t.near_aoi_m)
        sym(s.aois[i].id, RelationKind::AoiNearAoi, s.aois[j].id);
  for (const auto& a : s.aois)
    for (const auto& r : s.roads) {
      double best = 1e300;
      for (const auto& v : a.boundary)
        for (std::size_t k = 0; k + 1 < r.path.size(); ++k)
          best = std::min(best, sampled_segment_distance(v, r.path[k], r.path[k + 1]));
      if (best <= t.connect_m) out.insert({a.id, RelationKind::AoiConnectToRoad, r.id});
    }
  for (std::size_t i = 0; i < s.roads.size(); ++i)
    for (std::size_t j = i + 1; j < s.roads.size(); ++j) {
      bool hit = false;
      const auto& pa = s.roads[i].path;
      const auto& pb = s.roads[j].path;
      for (std::size_t x = 0; x + 1 < pa.size() && !hit; ++x)
        for (std::size_t y = 0; y + 1 < pb.size() && !hit; ++y)
          hit = segments_cross(pa[x], pa[x + 1], pb[y], pb[y + 1]);
      if (hit) sym(s.roads[i].id, RelationKind::RoadIntersectRoad, s.roads[j].id);
    }
  return out;
}

}  // namespace geohalu::oracle
