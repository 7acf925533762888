#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geohalu/geokg/entities.hpp"

namespace geohalu::geokg {

// Immutable once built; all accessors are const and safe for concurrent reads.
class GeoKnowledgeGraph {
 public:
  GeoKnowledgeGraph() = default;

  const std::string& city() const { return city_; }
  const std::vector<PoiEntity>& pois() const { return entities_.pois; }
  const std::vector<AoiEntity>& aois() const { return entities_.aois; }
  const std::vector<RoadEntity>& roads() const { return entities_.roads; }
  const EntitySet& entities() const { return entities_; }
  const std::vector<RelationEdge>& edges() const { return edges_; }
  const RegionThresholds& thresholds() const { return thresholds_; }

  std::size_t entity_count() const { return entities_.size(); }

  std::optional<EntityClass> class_of(std::string_view id) const;
  const PoiEntity* find_poi(std::string_view id) const;
  const AoiEntity* find_aoi(std::string_view id) const;
  const RoadEntity* find_road(std::string_view id) const;
  // Name of any entity; throws ValidationError if the id is unknown.
  const std::string& name_of(std::string_view id) const;

  // Symmetric kinds are matched in either argument order.
  bool has_edge(std::string_view head, RelationKind kind, std::string_view tail) const;

  // Ids of every entity of class `c`, in storage order.
  std::vector<std::string> ids_of(EntityClass c) const;

  // True when some entity's normalized name equals normalize_name(name).
  bool has_name(std::string_view name) const;

  bool operator==(const GeoKnowledgeGraph& o) const {
    return city_ == o.city_ && entities_ == o.entities_ && edges_ == o.edges_ &&
           thresholds_ == o.thresholds_;
  }

 private:
  friend GeoKnowledgeGraph build_graph(std::string city, EntitySet entities,
                                       std::vector<RelationEdge> edges,
                                       const RegionThresholds& thresholds);

  struct Slot {
    EntityClass cls;
    std::size_t index;
  };

  std::string city_;
  EntitySet entities_;
  std::vector<RelationEdge> edges_;
  RegionThresholds thresholds_;
  std::unordered_map<std::string, Slot> by_id_;
  std::unordered_set<std::string> edge_keys_;
  std::unordered_set<std::string> names_;
};

// Validates every entity and edge, canonicalizes symmetric edges, drops
// duplicates and sorts edges. Throws ValidationError on duplicate ids,
// invariant violations, or an edge with missing/mismatched endpoints (the
// message names the offending edge).
GeoKnowledgeGraph build_graph(std::string city, EntitySet entities,
                              std::vector<RelationEdge> edges,
                              const RegionThresholds& thresholds = {});

std::string edge_key(std::string_view head, RelationKind kind, std::string_view tail);

}  // namespace geohalu::geokg
