#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "geohalu/geokg/graph.hpp"

namespace geohalu::geokg {

enum class AttributeKind { PoiAddress, PoiCategory, AoiLandUse, AoiArea, RoadLength };

std::string_view to_string(AttributeKind a);
EntityClass owner_class(AttributeKind a);
bool is_numeric(AttributeKind a);

// What to draw: an entity of a class, an edge of a kind, or an entity that
// carries an attribute.
using Pattern = std::variant<EntityClass, RelationKind, AttributeKind>;

std::string describe(const Pattern& p);

struct Fact {
  Pattern pattern;
  std::string head_id;
  std::string tail_id;  // only set for relation patterns

  bool operator==(const Fact&) const = default;
};

// Every fact matching the pattern, in graph storage order.
std::vector<Fact> pattern_population(const GeoKnowledgeGraph& g, const Pattern& p);

// n distinct facts drawn without replacement; deterministic in rng_seed.
// Throws PopulationError naming the pattern and the available count when
// fewer than n exist.
std::vector<Fact> sample_pattern(const GeoKnowledgeGraph& g, const Pattern& p, std::size_t n,
                                 std::uint64_t rng_seed);

// Raw attribute value of entity `id`: string attributes as stored, land use
// as its enum name, numeric ones via attribute_number.
std::string attribute_text(const GeoKnowledgeGraph& g, AttributeKind a, const std::string& id);
double attribute_number(const GeoKnowledgeGraph& g, AttributeKind a, const std::string& id);

}  // namespace geohalu::geokg
