#pragma once

#include <string>

#include "geohalu/geokg/entities.hpp"
#include "geohalu/geokg/geometry.hpp"
#include "geohalu/random.hpp"

namespace geohalu::testing {

// Scattered random entities with frequent near-misses, for kernel parity.
inline geokg::EntitySet random_city(std::uint64_t seed, std::size_t n_poi, std::size_t n_aoi, std::size_t n_road) {
  using namespace geokg;
  Rng rng(seed);
  EntitySet s;
  auto pt = [&] { return GeoPoint{30 + rng.uniform(0, 0.02), 120 + rng.uniform(0, 0.02)}; };
  for (std::size_t i = 0; i < n_poi; ++i) s.pois.push_back({"p" + std::to_string(i), "P " + std::to_string(i), pt(), "", "Food"});
  for (std::size_t i = 0; i < n_aoi; ++i) {
    const GeoPoint c = pt();
    const double w = rng.uniform(0.0005, 0.004), h = rng.uniform(0.0005, 0.004);
    AoiEntity a{"a" + std::to_string(i), "A " + std::to_string(i),
                {{c.lat, c.lon}, {c.lat, c.lon + w}, {c.lat + h, c.lon + w}, {c.lat + h, c.lon}}, LandUse::Other, 0};
    a.area_m2 = polygon_area(a.boundary);
    s.aois.push_back(a);
  }
  for (std::size_t i = 0; i < n_road; ++i) {
    RoadEntity r{"r" + std::to_string(i), "R " + std::to_string(i), {pt(), pt(), pt()}, 0};
    r.length_m = polyline_length(r.path);
    s.roads.push_back(r);
  }
  return s;
}

}  // namespace geohalu::testing
