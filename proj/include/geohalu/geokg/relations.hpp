#pragma once

#include <vector>

#include "geohalu/geokg/entities.hpp"

namespace geohalu::geokg {

// Pairwise relation predicates. Each is the single definition both relation
// kernels use.
bool poi_located_at(const PoiEntity& poi, const AoiEntity& aoi);
bool pois_near(const PoiEntity& a, const PoiEntity& b, const RegionThresholds& t);
// AOI proximity is measured between polygon centroids.
bool aois_near(const AoiEntity& a, const AoiEntity& b, const RegionThresholds& t);
bool aoi_connects_road(const AoiEntity& aoi, const RoadEntity& road, const RegionThresholds& t);
bool roads_intersect(const RoadEntity& a, const RoadEntity& b);

// All-pairs relation derivation, parallelized with OpenMP over the outer
// entity loop. Output is canonical and sorted by (kind, head, tail), and is
// identical to derive_relations_serial for any thread count.
std::vector<RelationEdge> derive_relations(const EntitySet& entities,
                                           const RegionThresholds& thresholds);

// Straight nested-loop reference kept for tests and benchmarks.
std::vector<RelationEdge> derive_relations_serial(const EntitySet& entities,
                                                  const RegionThresholds& thresholds);

}  // namespace geohalu::geokg
