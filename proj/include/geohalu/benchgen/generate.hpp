#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geohalu/benchgen/fabricate.hpp"
#include "geohalu/benchgen/item.hpp"

namespace geohalu::benchgen {

struct GenerationConfig {
  std::uint64_t seed = 0;
  // Indexed by TaskKind; defaults 200 per Entity task, 250 per Relation
  // task, 50 per Attribute task (2,100 total).
  std::array<std::size_t, kTaskCount> counts = default_counts();
  double theta_attr = 0.5;
  FabricatorMode mode = FabricatorMode::Template;
  eval::ChatClient* client = nullptr;  // required for LlmAssisted

  std::size_t count(TaskKind t) const { return counts[static_cast<std::size_t>(t)]; }
  void set_count(TaskKind t, std::size_t n) { counts[static_cast<std::size_t>(t)] = n; }
  void set_all(std::size_t n) { counts.fill(n); }
  std::size_t total() const;

  static std::array<std::size_t, kTaskCount> default_counts();
};

void validate(const GenerationConfig& c);

// Lowercase, non-alphanumerics collapsed to '-'; used in item ids.
std::string city_slug(std::string_view city);

// "{slug}-{abbrev}-{index:04d}".
std::string make_item_id(std::string_view city, TaskKind task, std::size_t index);

// Question stem for a task, e.g. "Which of the following is a point of
// interest in Beijing?". `subject` is the name of the entity the question is
// about and is ignored for Existence tasks.
std::string question_stem(TaskKind task, std::string_view city, std::string_view subject);

// How an attribute value is shown as an option.
std::string attribute_display(const geokg::GeoKnowledgeGraph& g, geokg::AttributeKind a,
                              const std::string& id);

struct DraftOption {
  std::string text;
  OptionType type = OptionType::Factual;
  std::string entity_id;
};

struct ItemDraft {
  TaskKind task = TaskKind::PoiExistence;
  std::string city;
  std::string item_id;
  std::string head_id;
  std::string subject;  // name used in the question stem
  std::string fact_key;
  DraftOption factual;
  std::vector<DraftOption> distractors;
};

// Builds a Standard item. Existence and Relation tasks take exactly one
// fabrication distractor and get "None of the other options" as the
// omission option; Attribute tasks take exactly two AttributeConfusion
// distractors. Options are shuffled by rng_seed and labelled A, B, C.
// Throws ValidationError when the distractors do not fit the task.
BenchmarkItem assemble_item(const ItemDraft& draft, std::uint64_t rng_seed);

// Appends "Cannot Determine" (typed Abstain) and updates the instruction.
// Throws ValidationError if the item is already an Abstain item.
BenchmarkItem make_abstain_variant(const BenchmarkItem& item);
// Inverse of make_abstain_variant.
BenchmarkItem strip_abstain(const BenchmarkItem& item);

// Deterministic in (graph, config). Items are grouped by task in TaskKind
// order. Throws PopulationError naming the task on any shortfall.
std::vector<BenchmarkItem> generate_benchmark(const geokg::GeoKnowledgeGraph& graph,
                                              const GenerationConfig& config);

BenchmarkHeader make_header(const geokg::GeoKnowledgeGraph& graph, const GenerationConfig& config,
                            Variant variant, std::size_t count);

}  // namespace geohalu::benchgen
