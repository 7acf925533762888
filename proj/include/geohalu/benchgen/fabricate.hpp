#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geohalu/error.hpp"
#include "geohalu/eval/chat.hpp"
#include "geohalu/geokg/graph.hpp"
#include "geohalu/geokg/sampling.hpp"

namespace geohalu::benchgen {

enum class FabricatorMode { Template, LlmAssisted };

// LLM response had no [Hallucination] marker pairs.
class FabricationParseError : public ParseError {
 public:
  explicit FabricationParseError(std::string raw)
      : ParseError("no [Hallucination] marker pairs in response"), raw_(std::move(raw)) {}
  const std::string& raw_response() const { return raw_; }

 private:
  std::string raw_;
};

// Prompt asking for five fabricated names of the given kind, with
// `real_examples` filled into the example list.
std::string fabrication_prompt(geokg::EntityClass kind, const std::vector<std::string>& real_examples);

// Names wrapped in paired [Hallucination] markers, in order of appearance.
std::vector<std::string> parse_hallucination_markers(const std::string& response);

// Produces up to n distinct candidate names. Template mode composes names
// from a fixed lexicon (plus the last word of each real example) and is a
// pure function of its arguments. LlmAssisted mode sends
// fabrication_prompt through `client` until n names are collected. The
// result may still contain real names; pass it through filter_against_kg.
std::vector<std::string> fabricate_entity_names(geokg::EntityClass kind,
                                                const std::vector<std::string>& real_examples,
                                                std::size_t n, FabricatorMode mode,
                                                std::uint64_t rng_seed,
                                                eval::ChatClient* client = nullptr);

// Drops candidates whose normalized name matches any entity in the graph.
std::vector<std::string> filter_against_kg(const std::vector<std::string>& candidates,
                                           const geokg::GeoKnowledgeGraph& graph);

// A real entity of the relation's tail class that is not related to `head`
// by `kind`, is not `head` itself, and is not named like `true_tail`.
// Throws PopulationError when nothing is eligible.
std::string fabricate_relation(const geokg::GeoKnowledgeGraph& graph, const std::string& head,
                               geokg::RelationKind kind, const std::string& true_tail,
                               std::uint64_t rng_seed);

// Display text of numeric attributes: whole meters / square meters.
std::string format_numeric_attribute(geokg::AttributeKind a, double value);
// Leading number of an option produced by format_numeric_attribute.
double parse_numeric_attribute(const std::string& text);
// Rounded value shown for the true attribute (never below 1).
double displayed_number(double value);

// A positive whole number v with |v - true_value| / true_value >= theta and
// v not in `exclude`. Deterministic in rng_seed.
double confuse_numeric(double true_value, double theta, std::uint64_t rng_seed,
                       const std::vector<double>& exclude = {});

// Wrong display value for `attr` of the entity whose true display value is
// `true_text`:
//  - AoiArea/RoadLength: confuse_numeric, formatted;
//  - PoiCategory: an observed category with a different top-level category;
//  - AoiLandUse: another observed land use;
//  - PoiAddress: another entity's address that differs after normalization.
// Candidates listed in `exclude` (normalized) are skipped. Throws
// ValidationError for a one-value vocabulary and PopulationError when no
// candidate remains.
std::string confuse_attribute(const geokg::GeoKnowledgeGraph& graph, geokg::AttributeKind attr,
                              const std::string& true_text, double theta, std::uint64_t rng_seed,
                              const std::vector<std::string>& exclude = {});

}  // namespace geohalu::benchgen
