#include "geohalu/geokg/entities.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "geohalu/error.hpp"
#include "geohalu/text.hpp"

namespace geohalu::geokg {

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::Poi: return "poi";
    case EntityClass::Aoi: return "aoi";
    case EntityClass::Road: return "road";
  }
  return "?";
}

std::string_view to_string(LandUse u) {
  switch (u) {
    case LandUse::Industrial: return "industrial";
    case LandUse::Residential: return "residential";
    case LandUse::Commercial: return "commercial";
    case LandUse::Public: return "public";
    case LandUse::Other: return "other";
  }
  return "?";
}

std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::PoiLocateAtAoi: return "PoiLocateAtAoi";
    case RelationKind::PoiNearPoi: return "PoiNearPoi";
    case RelationKind::AoiNearAoi: return "AoiNearAoi";
    case RelationKind::AoiConnectToRoad: return "AoiConnectToRoad";
    case RelationKind::RoadIntersectRoad: return "RoadIntersectRoad";
  }
  return "?";
}

std::optional<EntityClass> parse_entity_class(std::string_view s) {
  for (auto c : {EntityClass::Poi, EntityClass::Aoi, EntityClass::Road})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<LandUse> parse_land_use(std::string_view s) {
  for (auto u : {LandUse::Industrial, LandUse::Residential, LandUse::Commercial, LandUse::Public,
                 LandUse::Other})
    if (to_string(u) == s) return u;
  return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  for (auto k : kAllRelationKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

EntityClass head_class(RelationKind k) {
  switch (k) {
    case RelationKind::PoiLocateAtAoi:
    case RelationKind::PoiNearPoi: return EntityClass::Poi;
    case RelationKind::AoiNearAoi:
    case RelationKind::AoiConnectToRoad: return EntityClass::Aoi;
    case RelationKind::RoadIntersectRoad: return EntityClass::Road;
  }
  return EntityClass::Poi;
}

EntityClass tail_class(RelationKind k) {
  switch (k) {
    case RelationKind::PoiNearPoi: return EntityClass::Poi;
    case RelationKind::PoiLocateAtAoi:
    case RelationKind::AoiNearAoi: return EntityClass::Aoi;
    case RelationKind::AoiConnectToRoad:
    case RelationKind::RoadIntersectRoad: return EntityClass::Road;
  }
  return EntityClass::Poi;
}

bool is_symmetric(RelationKind k) {
  return k == RelationKind::PoiNearPoi || k == RelationKind::AoiNearAoi ||
         k == RelationKind::RoadIntersectRoad;
}

RelationEdge canonical(RelationEdge e) {
  if (is_symmetric(e.kind) && e.tail_id < e.head_id) std::swap(e.head_id, e.tail_id);
  return e;
}

void validate(const RegionThresholds& t) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(t.near_poi_m) || !positive(t.near_aoi_m) || !positive(t.connect_m))
    throw ValidationError("region thresholds must be strictly positive");
}

std::string top_level_category(std::string_view category) {
  const auto pos = category.find(" > ");
  return collapse_whitespace(category.substr(0, pos));
}

namespace {

void check_common(std::string_view kind, const std::string& id, const std::string& name) {
  if (id.empty()) throw ValidationError(std::string(kind) + " with empty id");
  if (collapse_whitespace(name).empty())
    throw ValidationError(std::string(kind) + " '" + id + "' has an empty name");
}

}  // namespace

void validate(const PoiEntity& e) {
  check_common("poi", e.id, e.name);
  if (!is_valid(e.location)) throw ValidationError("poi '" + e.id + "' has an invalid location");
}

void validate(const AoiEntity& e) {
  check_common("aoi", e.id, e.name);
  const auto& ring = e.boundary;
  for (const auto& p : ring)
    if (!is_valid(p)) throw ValidationError("aoi '" + e.id + "' has an invalid vertex");
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : ring) distinct.emplace(p.lat, p.lon);
  if (distinct.size() < 3)
    throw ValidationError("aoi '" + e.id + "' needs at least 3 distinct vertices");
  if (ring.front() == ring.back())
    throw ValidationError("aoi '" + e.id + "' ring must not repeat its first vertex");
  if (!is_simple_polygon(ring))
    throw ValidationError("aoi '" + e.id + "' boundary self-intersects");
  if (!(std::isfinite(e.area_m2) && e.area_m2 > 0.0))
    throw ValidationError("aoi '" + e.id + "' area must be positive");
  const double recomputed = polygon_area(ring);
  if (std::abs(e.area_m2 - recomputed) > 0.05 * recomputed)
    throw ValidationError("aoi '" + e.id + "' area disagrees with its boundary by more than 5%");
}

void validate(const RoadEntity& e) {
  check_common("road", e.id, e.name);
  if (e.path.size() < 2) throw ValidationError("road '" + e.id + "' needs at least 2 points");
  for (const auto& p : e.path)
    if (!is_valid(p)) throw ValidationError("road '" + e.id + "' has an invalid point");
  if (!(std::isfinite(e.length_m) && e.length_m > 0.0))
    throw ValidationError("road '" + e.id + "' length must be positive");
  const double recomputed = polyline_length(e.path);
  if (std::abs(e.length_m - recomputed) > 0.01 * recomputed)
    throw ValidationError("road '" + e.id + "' length disagrees with its path by more than 1%");
}

}  // namespace geohalu::geokg
