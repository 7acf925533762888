#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geohalu/benchgen/fabricate.hpp"
#include "geohalu/benchgen/item.hpp"

namespace geohalu::alignset {

using benchgen::Category;
using benchgen::TaskKind;

enum class Label { Desirable, Undesirable };

std::string_view to_string(Label l);
Label parse_label(std::string_view s);

struct TrainingSample {
  std::string sample_id;
  Category task_tag = Category::Entity;
  TaskKind subtask = TaskKind::PoiExistence;
  std::string prompt;
  std::string completion;
  // The opposite-polarity completion for the same prompt (the true answer
  // for an Undesirable sample, a hallucinated one for a Desirable sample).
  // Pairs (prompt, true, false) feed the FactDistance diagnostic.
  std::string counterpart;
  Label label = Label::Desirable;
  std::string fact_key;
  std::string head_id;  // entity the sample is about

  const std::string& factual() const { return label == Label::Desirable ? completion : counterpart; }
  const std::string& hallucinated() const { return label == Label::Desirable ? counterpart : completion; }

  bool operator==(const TrainingSample&) const = default;
};

struct AlignsetConfig {
  std::uint64_t seed = 0;
  // Totals per first-level category, split evenly over its subtasks.
  std::size_t entity_count = 1500;
  std::size_t relation_count = 2000;
  std::size_t attribute_count = 2000;
  bool paraphrase = true;
  double negative_ratio = 0.5;
  double theta_attr = 0.5;
  benchgen::FabricatorMode mode = benchgen::FabricatorMode::Template;
  eval::ChatClient* client = nullptr;

  std::size_t category_count(Category c) const;
};

void validate(const AlignsetConfig& c);

// Per-subtask counts: the category total divided evenly, remainder to the
// earliest subtasks.
std::array<std::size_t, benchgen::kTaskCount> subtask_counts(const AlignsetConfig& c);

inline constexpr std::size_t kParaphraseVariants = 3;

// Narrative question for a subtask; `variant` < kParaphraseVariants.
std::string render_prompt(TaskKind task, std::size_t variant, std::string_view city,
                          std::string_view subject);

// Facts whose fact_key appears in `benchmark` are never used. Deterministic
// in (graph, benchmark, config). Throws PopulationError naming the subtask.
std::vector<TrainingSample> generate_alignment_dataset(
    const geokg::GeoKnowledgeGraph& graph, const std::vector<benchgen::BenchmarkItem>& benchmark,
    const AlignsetConfig& config);

struct Collision {
  std::string sample_id;
  std::string item_id;
  std::string fact_key;

  bool operator==(const Collision&) const = default;
};

struct LeakageReport {
  bool clean = true;
  std::vector<Collision> collisions;  // one per colliding sample, in sample order
};

LeakageReport leakage_check(const std::vector<TrainingSample>& samples,
                            const std::vector<benchgen::BenchmarkItem>& benchmark);

struct AlignsetHeader {
  std::string city;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

inline constexpr int kAlignFormatVersion = 1;

std::string to_json_line(const TrainingSample& s);
TrainingSample sample_from_json_line(const std::string& line);

void write_alignset(const std::vector<TrainingSample>& samples, const AlignsetHeader& header,
                    std::ostream& out);

struct AlignsetFile {
  AlignsetHeader header;
  std::vector<TrainingSample> samples;
};

AlignsetFile read_alignset(std::istream& in);
void save_alignset(const std::vector<TrainingSample>& samples, const AlignsetHeader& header,
                   const std::filesystem::path& path);
AlignsetFile load_alignset(const std::filesystem::path& path);

}  // namespace geohalu::alignset
