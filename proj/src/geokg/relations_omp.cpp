#include <algorithm>
#include <tuple>
#include <cstddef>

#include "geohalu/geokg/geometry.hpp"
#include "geohalu/geokg/relations.hpp"

namespace geohalu::geokg {
namespace {

// Runs body(i, bucket) for i in [0, n) in parallel; each i owns its bucket so
// the concatenation order is independent of scheduling.
template <class Body>
void parallel_collect(std::size_t n, std::vector<RelationEdge>& out, Body body) {
  std::vector<std::vector<RelationEdge>> buckets(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i), buckets[i]);
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
}

}  // namespace

std::vector<RelationEdge> derive_relations(const EntitySet& es, const RegionThresholds& t) {
  validate(t);
  // Centroids once per AOI instead of once per pair.
  std::vector<GeoPoint> centroids(es.aois.size());
  for (std::size_t i = 0; i < es.aois.size(); ++i) centroids[i] = polygon_centroid(es.aois[i].boundary);

  std::vector<RelationEdge> out;
  parallel_collect(es.pois.size(), out, [&](std::size_t i, std::vector<RelationEdge>& bucket) {
    const auto& p = es.pois[i];
    for (const auto& a : es.aois)
      if (poi_located_at(p, a)) bucket.push_back({p.id, RelationKind::PoiLocateAtAoi, a.id});
    for (std::size_t j = i + 1; j < es.pois.size(); ++j)
      if (haversine_distance(p.location, es.pois[j].location) <= t.near_poi_m)
        bucket.push_back(canonical({p.id, RelationKind::PoiNearPoi, es.pois[j].id}));
  });
  parallel_collect(es.aois.size(), out, [&](std::size_t i, std::vector<RelationEdge>& bucket) {
    const auto& a = es.aois[i];
    for (std::size_t j = i + 1; j < es.aois.size(); ++j)
      if (haversine_distance(centroids[i], centroids[j]) <= t.near_aoi_m)
        bucket.push_back(canonical({a.id, RelationKind::AoiNearAoi, es.aois[j].id}));
    for (const auto& r : es.roads)
      if (aoi_connects_road(a, r, t)) bucket.push_back({a.id, RelationKind::AoiConnectToRoad, r.id});
  });
  parallel_collect(es.roads.size(), out, [&](std::size_t i, std::vector<RelationEdge>& bucket) {
    for (std::size_t j = i + 1; j < es.roads.size(); ++j)
      if (roads_intersect(es.roads[i], es.roads[j]))
        bucket.push_back(canonical({es.roads[i].id, RelationKind::RoadIntersectRoad, es.roads[j].id}));
  });
  std::sort(out.begin(), out.end(), [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.kind, a.head_id, a.tail_id) < std::tie(b.kind, b.head_id, b.tail_id);
  });
  return out;
}

}  // namespace geohalu::geokg
