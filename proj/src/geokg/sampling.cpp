#include "geohalu/geokg/sampling.hpp"

#include "geohalu/error.hpp"
#include "geohalu/random.hpp"

namespace geohalu::geokg {

std::string_view to_string(AttributeKind a) {
  switch (a) {
    case AttributeKind::PoiAddress: return "address";
    case AttributeKind::PoiCategory: return "category";
    case AttributeKind::AoiLandUse: return "land_use";
    case AttributeKind::AoiArea: return "area_m2";
    case AttributeKind::RoadLength: return "length_m";
  }
  return "?";
}

EntityClass owner_class(AttributeKind a) {
  switch (a) {
    case AttributeKind::PoiAddress:
    case AttributeKind::PoiCategory: return EntityClass::Poi;
    case AttributeKind::AoiLandUse:
    case AttributeKind::AoiArea: return EntityClass::Aoi;
    case AttributeKind::RoadLength: return EntityClass::Road;
  }
  return EntityClass::Poi;
}

bool is_numeric(AttributeKind a) {
  return a == AttributeKind::AoiArea || a == AttributeKind::RoadLength;
}

std::string describe(const Pattern& p) {
  struct {
    std::string operator()(EntityClass c) const { return "entity(" + std::string(to_string(c)) + ")"; }
    std::string operator()(RelationKind k) const { return "relation(" + std::string(to_string(k)) + ")"; }
    std::string operator()(AttributeKind a) const { return "attribute(" + std::string(to_string(a)) + ")"; }
  } visitor;
  return std::visit(visitor, p);
}

std::vector<Fact> pattern_population(const GeoKnowledgeGraph& g, const Pattern& p) {
  std::vector<Fact> out;
  if (auto* cls = std::get_if<EntityClass>(&p)) {
    for (auto& id : g.ids_of(*cls)) out.push_back({p, std::move(id), {}});
  } else if (auto* kind = std::get_if<RelationKind>(&p)) {
    for (const auto& e : g.edges())
      if (e.kind == *kind) out.push_back({p, e.head_id, e.tail_id});
  } else {
    const auto attr = std::get<AttributeKind>(p);
    switch (attr) {
      case AttributeKind::PoiAddress:
        for (const auto& e : g.pois())
          if (!e.address.empty()) out.push_back({p, e.id, {}});
        break;
      case AttributeKind::PoiCategory:
        for (const auto& e : g.pois())
          if (!e.category.empty()) out.push_back({p, e.id, {}});
        break;
      default:
        for (auto& id : g.ids_of(owner_class(attr))) out.push_back({p, std::move(id), {}});
    }
  }
  return out;
}

std::vector<Fact> sample_pattern(const GeoKnowledgeGraph& g, const Pattern& p, std::size_t n,
                                 std::uint64_t rng_seed) {
  std::vector<Fact> pop = pattern_population(g, p);
  if (pop.size() < n)
    throw PopulationError("pattern " + describe(p) + " needs " + std::to_string(n) +
                          " facts but only " + std::to_string(pop.size()) + " are available");
  Rng rng(rng_seed);
  // Partial Fisher-Yates: the first n slots end up as the sample.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = k + rng.index(pop.size() - k);
    std::swap(pop[k], pop[j]);
  }
  pop.resize(n);
  return pop;
}

std::string attribute_text(const GeoKnowledgeGraph& g, AttributeKind a, const std::string& id) {
  switch (a) {
    case AttributeKind::PoiAddress:
    case AttributeKind::PoiCategory: {
      const auto* poi = g.find_poi(id);
      if (!poi) throw ValidationError("unknown poi '" + id + "'");
      return a == AttributeKind::PoiAddress ? poi->address : poi->category;
    }
    case AttributeKind::AoiLandUse: {
      const auto* aoi = g.find_aoi(id);
      if (!aoi) throw ValidationError("unknown aoi '" + id + "'");
      return std::string(to_string(aoi->land_use));
    }
    case AttributeKind::AoiArea:
    case AttributeKind::RoadLength: return std::to_string(attribute_number(g, a, id));
  }
  return {};
}

double attribute_number(const GeoKnowledgeGraph& g, AttributeKind a, const std::string& id) {
  if (a == AttributeKind::AoiArea) {
    const auto* aoi = g.find_aoi(id);
    if (!aoi) throw ValidationError("unknown aoi '" + id + "'");
    return aoi->area_m2;
  }
  if (a == AttributeKind::RoadLength) {
    const auto* road = g.find_road(id);
    if (!road) throw ValidationError("unknown road '" + id + "'");
    return road->length_m;
  }
  throw ValidationError("attribute " + std::string(to_string(a)) + " is not numeric");
}

}  // namespace geohalu::geokg
