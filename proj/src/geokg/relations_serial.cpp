#include <algorithm>
#include <tuple>

#include "geohalu/geokg/geometry.hpp"
#include "geohalu/geokg/relations.hpp"

namespace geohalu::geokg {

bool poi_located_at(const PoiEntity& poi, const AoiEntity& aoi) {
  return point_in_polygon(poi.location, aoi.boundary);
}

bool pois_near(const PoiEntity& a, const PoiEntity& b, const RegionThresholds& t) {
  return haversine_distance(a.location, b.location) <= t.near_poi_m;
}

bool aois_near(const AoiEntity& a, const AoiEntity& b, const RegionThresholds& t) {
  return haversine_distance(polygon_centroid(a.boundary), polygon_centroid(b.boundary)) <=
         t.near_aoi_m;
}

bool aoi_connects_road(const AoiEntity& aoi, const RoadEntity& road, const RegionThresholds& t) {
  return ring_to_path_distance(aoi.boundary, road.path) <= t.connect_m;
}

bool roads_intersect(const RoadEntity& a, const RoadEntity& b) {
  return paths_intersect(a.path, b.path);
}

std::vector<RelationEdge> derive_relations_serial(const EntitySet& es, const RegionThresholds& t) {
  std::vector<RelationEdge> out;
  for (const auto& p : es.pois)
    for (const auto& a : es.aois)
      if (poi_located_at(p, a)) out.push_back({p.id, RelationKind::PoiLocateAtAoi, a.id});
  for (std::size_t i = 0; i < es.pois.size(); ++i)
    for (std::size_t j = i + 1; j < es.pois.size(); ++j)
      if (pois_near(es.pois[i], es.pois[j], t))
        out.push_back(canonical({es.pois[i].id, RelationKind::PoiNearPoi, es.pois[j].id}));
  for (std::size_t i = 0; i < es.aois.size(); ++i)
    for (std::size_t j = i + 1; j < es.aois.size(); ++j)
      if (aois_near(es.aois[i], es.aois[j], t))
        out.push_back(canonical({es.aois[i].id, RelationKind::AoiNearAoi, es.aois[j].id}));
  for (const auto& a : es.aois)
    for (const auto& r : es.roads)
      if (aoi_connects_road(a, r, t)) out.push_back({a.id, RelationKind::AoiConnectToRoad, r.id});
  for (std::size_t i = 0; i < es.roads.size(); ++i)
    for (std::size_t j = i + 1; j < es.roads.size(); ++j)
      if (roads_intersect(es.roads[i], es.roads[j]))
        out.push_back(canonical({es.roads[i].id, RelationKind::RoadIntersectRoad, es.roads[j].id}));
  std::sort(out.begin(), out.end(), [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.kind, a.head_id, a.tail_id) < std::tie(b.kind, b.head_id, b.tail_id);
  });
  return out;
}

}  // namespace geohalu::geokg
