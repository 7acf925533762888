#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geohalu/geokg/geometry.hpp"

namespace geohalu::geokg {

enum class EntityClass { Poi, Aoi, Road };

enum class LandUse { Industrial, Residential, Commercial, Public, Other };

enum class RelationKind { PoiLocateAtAoi, PoiNearPoi, AoiNearAoi, AoiConnectToRoad, RoadIntersectRoad };

inline constexpr RelationKind kAllRelationKinds[] = {
    RelationKind::PoiLocateAtAoi, RelationKind::PoiNearPoi, RelationKind::AoiNearAoi,
    RelationKind::AoiConnectToRoad, RelationKind::RoadIntersectRoad};

std::string_view to_string(EntityClass c);
std::string_view to_string(LandUse u);
std::string_view to_string(RelationKind k);
std::optional<EntityClass> parse_entity_class(std::string_view s);
std::optional<LandUse> parse_land_use(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);

EntityClass head_class(RelationKind k);
EntityClass tail_class(RelationKind k);
// Near and Intersect relations are symmetric and stored once with
// head_id < tail_id.
bool is_symmetric(RelationKind k);

struct PoiEntity {
  std::string id;
  std::string name;
  GeoPoint location;
  std::string address;
  std::string category;  // levels joined by " > "

  bool operator==(const PoiEntity&) const = default;
};

struct AoiEntity {
  std::string id;
  std::string name;
  std::vector<GeoPoint> boundary;  // open ring, closure implied
  LandUse land_use = LandUse::Other;
  double area_m2 = 0.0;

  bool operator==(const AoiEntity&) const = default;
};

struct RoadEntity {
  std::string id;
  std::string name;
  std::vector<GeoPoint> path;
  double length_m = 0.0;

  bool operator==(const RoadEntity&) const = default;
};

struct RelationEdge {
  std::string head_id;
  RelationKind kind = RelationKind::PoiLocateAtAoi;
  std::string tail_id;

  bool operator==(const RelationEdge&) const = default;
  auto operator<=>(const RelationEdge&) const = default;
};

// Returns the edge with symmetric kinds reordered so head_id < tail_id.
RelationEdge canonical(RelationEdge e);

struct EntitySet {
  std::vector<PoiEntity> pois;
  std::vector<AoiEntity> aois;
  std::vector<RoadEntity> roads;

  std::size_t size() const { return pois.size() + aois.size() + roads.size(); }
  bool operator==(const EntitySet&) const = default;
};

struct RegionThresholds {
  double near_poi_m = 200.0;
  double near_aoi_m = 500.0;
  double connect_m = 30.0;

  bool operator==(const RegionThresholds&) const = default;
};

void validate(const RegionThresholds& t);

// Top-level segment of a " > " category path.
std::string top_level_category(std::string_view category);

// Per-entity invariant checks; throw ValidationError naming the entity.
void validate(const PoiEntity& e);
void validate(const AoiEntity& e);
void validate(const RoadEntity& e);

}  // namespace geohalu::geokg
