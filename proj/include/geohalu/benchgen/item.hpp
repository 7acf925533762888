#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/benchgen/taxonomy.hpp"

namespace geohalu::benchgen {

enum class Variant { Standard, Abstain };

std::string_view to_string(Variant v);

inline constexpr std::string_view kNoneOfTheOthers = "None of the other options";
inline constexpr std::string_view kCannotDetermine = "Cannot Determine";
inline constexpr std::string_view kQuestionPreamble = "Here is a multiple-choice question:";

struct Option {
  std::string label;  // "A".."E"
  std::string text;
  OptionType type = OptionType::Factual;
  std::string entity_id;  // real entity named by this option, if any

  bool operator==(const Option&) const = default;
};

struct BenchmarkItem {
  std::string item_id;
  std::string city;
  TaskKind task = TaskKind::PoiExistence;
  std::string question;     // stem, e.g. "Which of the following is a point of interest in Beijing?"
  std::string instruction;  // "Please select from A, B, C. Output your answer directly"
  std::vector<Option> options;
  std::string answer_label;
  Variant variant = Variant::Standard;
  std::string head_id;   // entity the question is about (relation/attribute tasks)
  std::string fact_key;  // identity of the factual fact, see benchgen::fact_key

  const Option* find_option(std::string_view label) const;
  std::optional<OptionType> option_type(std::string_view label) const;
  std::vector<std::string> labels() const;

  bool operator==(const BenchmarkItem&) const = default;
};

std::string instruction_for(const std::vector<std::string>& labels);

// Throws ValidationError describing the first broken invariant.
void validate(const BenchmarkItem& item);

struct BenchmarkHeader {
  std::string city;
  Variant variant = Variant::Standard;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

inline constexpr int kBenchFormatVersion = 1;

std::string to_json_line(const BenchmarkItem& item);
BenchmarkItem item_from_json_line(const std::string& line);

void write_benchmark(const std::vector<BenchmarkItem>& items, const BenchmarkHeader& header,
                     std::ostream& out);
std::string benchmark_to_string(const std::vector<BenchmarkItem>& items,
                                const BenchmarkHeader& header);

struct BenchmarkFile {
  BenchmarkHeader header;
  std::vector<BenchmarkItem> items;
};

BenchmarkFile read_benchmark(std::istream& in);
void save_benchmark(const std::vector<BenchmarkItem>& items, const BenchmarkHeader& header,
                    const std::filesystem::path& path);
BenchmarkFile load_benchmark(const std::filesystem::path& path);

}  // namespace geohalu::benchgen
