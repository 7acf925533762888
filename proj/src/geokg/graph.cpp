#include "geohalu/geokg/graph.hpp"

#include <algorithm>
#include <tuple>

#include "geohalu/error.hpp"
#include "geohalu/text.hpp"

namespace geohalu::geokg {

std::string edge_key(std::string_view head, RelationKind kind, std::string_view tail) {
  std::string key;
  key.reserve(head.size() + tail.size() + 24);
  key.append(head).push_back('\x1f');
  key.append(to_string(kind)).push_back('\x1f');
  key.append(tail);
  return key;
}

std::optional<EntityClass> GeoKnowledgeGraph::class_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second.cls;
}

const PoiEntity* GeoKnowledgeGraph::find_poi(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end() || it->second.cls != EntityClass::Poi) return nullptr;
  return &entities_.pois[it->second.index];
}

const AoiEntity* GeoKnowledgeGraph::find_aoi(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end() || it->second.cls != EntityClass::Aoi) return nullptr;
  return &entities_.aois[it->second.index];
}

const RoadEntity* GeoKnowledgeGraph::find_road(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end() || it->second.cls != EntityClass::Road) return nullptr;
  return &entities_.roads[it->second.index];
}

const std::string& GeoKnowledgeGraph::name_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) throw ValidationError("unknown entity id '" + std::string(id) + "'");
  switch (it->second.cls) {
    case EntityClass::Poi: return entities_.pois[it->second.index].name;
    case EntityClass::Aoi: return entities_.aois[it->second.index].name;
    case EntityClass::Road: return entities_.roads[it->second.index].name;
  }
  throw ValidationError("unreachable");
}

bool GeoKnowledgeGraph::has_edge(std::string_view head, RelationKind kind,
                                 std::string_view tail) const {
  if (edge_keys_.contains(edge_key(head, kind, tail))) return true;
  return is_symmetric(kind) && edge_keys_.contains(edge_key(tail, kind, head));
}

std::vector<std::string> GeoKnowledgeGraph::ids_of(EntityClass c) const {
  std::vector<std::string> ids;
  switch (c) {
    case EntityClass::Poi:
      for (const auto& e : entities_.pois) ids.push_back(e.id);
      break;
    case EntityClass::Aoi:
      for (const auto& e : entities_.aois) ids.push_back(e.id);
      break;
    case EntityClass::Road:
      for (const auto& e : entities_.roads) ids.push_back(e.id);
      break;
  }
  return ids;
}

bool GeoKnowledgeGraph::has_name(std::string_view name) const {
  return names_.contains(normalize_name(name));
}

GeoKnowledgeGraph build_graph(std::string city, EntitySet entities,
                              std::vector<RelationEdge> edges,
                              const RegionThresholds& thresholds) {
  validate(thresholds);
  GeoKnowledgeGraph g;
  g.city_ = std::move(city);
  g.thresholds_ = thresholds;

  auto add = [&](const std::string& id, EntityClass cls, std::size_t index,
                 const std::string& name) {
    if (!g.by_id_.emplace(id, GeoKnowledgeGraph::Slot{cls, index}).second)
      throw ValidationError("duplicate entity id '" + id + "'");
    g.names_.insert(normalize_name(name));
  };
  for (std::size_t i = 0; i < entities.pois.size(); ++i) {
    validate(entities.pois[i]);
    add(entities.pois[i].id, EntityClass::Poi, i, entities.pois[i].name);
  }
  for (std::size_t i = 0; i < entities.aois.size(); ++i) {
    validate(entities.aois[i]);
    add(entities.aois[i].id, EntityClass::Aoi, i, entities.aois[i].name);
  }
  for (std::size_t i = 0; i < entities.roads.size(); ++i) {
    validate(entities.roads[i]);
    add(entities.roads[i].id, EntityClass::Road, i, entities.roads[i].name);
  }
  g.entities_ = std::move(entities);

  auto describe = [](const RelationEdge& e) {
    return "(" + e.head_id + ", " + std::string(to_string(e.kind)) + ", " + e.tail_id + ")";
  };
  for (auto& e : edges) {
    e = canonical(std::move(e));
    if (e.head_id == e.tail_id) throw ValidationError("self-edge " + describe(e));
    auto hc = g.class_of(e.head_id);
    auto tc = g.class_of(e.tail_id);
    if (!hc || !tc) throw ValidationError("edge references a missing entity: " + describe(e));
    if (*hc != head_class(e.kind) || *tc != tail_class(e.kind))
      throw ValidationError("edge endpoint classes do not match its kind: " + describe(e));
  }
  std::sort(edges.begin(), edges.end(), [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.kind, a.head_id, a.tail_id) < std::tie(b.kind, b.head_id, b.tail_id);
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) g.edge_keys_.insert(edge_key(e.head_id, e.kind, e.tail_id));
  g.edges_ = std::move(edges);
  return g;
}

}  // namespace geohalu::geokg
