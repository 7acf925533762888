#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/eval/harness.hpp"

namespace geohalu::scoring {

using benchgen::BenchmarkItem;
using benchgen::OptionType;
using eval::EvalRecord;

struct CategoryScores {
  double entity_acc = 0.0;
  double relation_acc = 0.0;
  double attribute_acc = 0.0;
  double overall = 0.0;  // unweighted mean of the three

  bool operator==(const CategoryScores&) const = default;
};

// Micro accuracy per category over the benchmark's items; an item without
// a record counts as wrong, a category without items scores 0. Throws
// ValidationError for a record whose item is unknown or recorded twice.
CategoryScores score_run(const std::vector<BenchmarkItem>& items,
                         const std::vector<EvalRecord>& records);

struct TypeDistribution {
  std::array<double, benchgen::kAllOptionTypes.size()> fractions{};  // kAllOptionTypes order
  std::size_t total = 0;

  double operator[](OptionType t) const { return fractions[static_cast<std::size_t>(t)]; }
  bool operator==(const TypeDistribution&) const = default;
};

// Outcome counts over all records divided by the record count (all zero for
// no records).
TypeDistribution type_distribution(const std::vector<EvalRecord>& records);

// Mean CategoryScores of `trials` simulated uniform-random runs. Trial t
// answers exactly as eval::MockEndpoint(UniformRandom, derive_seed(seed, t)).
CategoryScores random_baseline(const std::vector<BenchmarkItem>& items, std::uint64_t seed,
                               std::size_t trials = 100);

struct RankEntry {
  std::string model;
  double overall = 0.0;
  std::size_t rank = 0;     // 1-based
  double percentile = 1.0;  // 1 - (rank-1)/(n-1); 1 when n = 1

  bool operator==(const RankEntry&) const = default;
};

using Ranking = std::vector<RankEntry>;

// Descending overall, ties broken by model name.
Ranking rank_models(const std::vector<std::pair<std::string, CategoryScores>>& scores);

struct RankShift {
  std::string model;
  std::size_t rank_a = 0, rank_b = 0;
  double percentile_a = 0.0, percentile_b = 0.0;
  double delta = 0.0;  // percentile_b - percentile_a
};

// Models ranked in both, ordered by name.
std::vector<RankShift> percentile_shift(const Ranking& a, const Ranking& b);

enum class ReportFormat { Markdown, Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view s);

struct ReportRow {
  std::string model;
  CategoryScores scores;
  std::optional<TypeDistribution> distribution;

  bool operator==(const ReportRow&) const = default;
};

// Rows are ranked with rank_models and listed in rank order. Columns:
// Model, Entity, Relation, Attribute, Overall, Ranking, then one column per
// outcome type when any row carries a distribution. Markdown and csv show
// fractions with 4 decimals; json keeps full precision.
std::string emit_report(const std::vector<ReportRow>& rows, ReportFormat format);

// Rows of a json report, in report order.
std::vector<ReportRow> parse_json_report(const std::string& document);

}  // namespace geohalu::scoring
