#include "geohalu/scoring/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "geohalu/random.hpp"

namespace geohalu::scoring {

using benchgen::Category;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::size_t cat_index(Category c) { return static_cast<std::size_t>(c); }

CategoryScores from_counts(const std::array<std::size_t, 3>& correct, const std::array<std::size_t, 3>& total) {
  auto acc = [&](Category c) {
    const auto i = cat_index(c);
    return total[i] == 0 ? 0.0 : static_cast<double>(correct[i]) / static_cast<double>(total[i]);
  };
  CategoryScores s;
  s.entity_acc = acc(Category::Entity);
  s.relation_acc = acc(Category::Relation);
  s.attribute_acc = acc(Category::Attribute);
  s.overall = (s.entity_acc + s.relation_acc + s.attribute_acc) / 3.0;
  return s;
}

}  // namespace

CategoryScores score_run(const std::vector<BenchmarkItem>& items, const std::vector<EvalRecord>& records) {
  std::unordered_map<std::string, Category> cat;
  std::array<std::size_t, 3> total{}, correct{};
  for (const auto& item : items) {
    const Category c = benchgen::category_of(item.task);
    cat.emplace(item.item_id, c);
    ++total[cat_index(c)];
  }
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    auto it = cat.find(r.item_id);
    if (it == cat.end()) throw ValidationError("record for unknown item '" + r.item_id + "'");
    if (!seen.insert(r.item_id).second) throw ValidationError("item '" + r.item_id + "' recorded twice");
    if (r.outcome == OptionType::Factual) ++correct[cat_index(it->second)];
  }
  return from_counts(correct, total);
}

TypeDistribution type_distribution(const std::vector<EvalRecord>& records) {
  TypeDistribution d;
  d.total = records.size();
  if (records.empty()) return d;
  std::array<std::size_t, benchgen::kAllOptionTypes.size()> counts{};
  for (const auto& r : records) ++counts[static_cast<std::size_t>(r.outcome)];
  for (std::size_t i = 0; i < counts.size(); ++i)
    d.fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(records.size());
  return d;
}

CategoryScores random_baseline(const std::vector<BenchmarkItem>& items, std::uint64_t seed,
                               std::size_t trials) {
  if (trials == 0) throw ValidationError("random baseline needs at least one trial");
  CategoryScores sum;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, t);
    std::array<std::size_t, 3> total{}, correct{};
    for (const auto& item : items) {
      const auto c = cat_index(benchgen::category_of(item.task));
      ++total[c];
      Rng rng(derive_seed(trial_seed, item.item_id));
      if (item.options[rng.index(item.options.size())].type == OptionType::Factual) ++correct[c];
    }
    const CategoryScores s = from_counts(correct, total);
    sum.entity_acc += s.entity_acc;
    sum.relation_acc += s.relation_acc;
    sum.attribute_acc += s.attribute_acc;
  }
  const double n = static_cast<double>(trials);
  sum.entity_acc /= n;
  sum.relation_acc /= n;
  sum.attribute_acc /= n;
  sum.overall = (sum.entity_acc + sum.relation_acc + sum.attribute_acc) / 3.0;
  return sum;
}

Ranking rank_models(const std::vector<std::pair<std::string, CategoryScores>>& scores) {
  Ranking r;
  for (const auto& [name, s] : scores) r.push_back({name, s.overall, 0, 1.0});
  std::sort(r.begin(), r.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.overall != b.overall) return a.overall > b.overall;
    return a.model < b.model;
  });
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    r[i].rank = i + 1;
    r[i].percentile = n == 1 ? 1.0 : 1.0 - static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return r;
}

std::vector<RankShift> percentile_shift(const Ranking& a, const Ranking& b) {
  std::map<std::string, const RankEntry*> in_b;
  for (const auto& e : b) in_b.emplace(e.model, &e);
  std::vector<RankShift> out;
  for (const auto& e : a) {
    auto it = in_b.find(e.model);
    if (it == in_b.end()) continue;
    const RankEntry& f = *it->second;
    out.push_back({e.model, e.rank, f.rank, e.percentile, f.percentile, f.percentile - e.percentile});
  }
  std::sort(out.begin(), out.end(), [](const RankShift& x, const RankShift& y) { return x.model < y.model; });
  return out;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  return std::nullopt;
}

namespace {

const std::vector<std::string>& score_columns() {
  static const std::vector<std::string> cols{"Model", "Entity", "Relation", "Attribute", "Overall", "Ranking"};
  return cols;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string emit_report(const std::vector<ReportRow>& rows, ReportFormat format) {
  bool with_dist = false;
  for (const auto& r : rows) with_dist = with_dist || r.distribution.has_value();

  std::vector<std::string> columns = score_columns();
  if (with_dist)
    for (auto t : benchgen::kAllOptionTypes) columns.emplace_back(benchgen::to_string(t));

  std::vector<std::pair<std::string, CategoryScores>> named;
  for (const auto& r : rows) named.emplace_back(r.model, r.scores);
  const Ranking ranking = rank_models(named);
  // Rank order; equal names keep input order.
  std::vector<std::pair<const ReportRow*, std::size_t>> ordered;
  std::vector<bool> used(rows.size(), false);
  for (const auto& e : ranking)
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!used[i] && rows[i].model == e.model && rows[i].scores.overall == e.overall) {
        used[i] = true;
        ordered.emplace_back(&rows[i], e.rank);
        break;
      }

  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["columns"] = columns;
    doc["rows"] = ordered_json::array();
    for (const auto& [row, rank] : ordered) {
      ordered_json j;
      j["Model"] = row->model;
      j["Entity"] = row->scores.entity_acc;
      j["Relation"] = row->scores.relation_acc;
      j["Attribute"] = row->scores.attribute_acc;
      j["Overall"] = row->scores.overall;
      j["Ranking"] = rank;
      if (row->distribution) {
        ordered_json d;
        for (auto t : benchgen::kAllOptionTypes) d[std::string(benchgen::to_string(t))] = (*row->distribution)[t];
        j["distribution"] = std::move(d);
        j["records"] = row->distribution->total;
      }
      doc["rows"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> cells;
  for (const auto& [row, rank] : ordered) {
    std::vector<std::string> c{row->model, fixed4(row->scores.entity_acc), fixed4(row->scores.relation_acc),
                               fixed4(row->scores.attribute_acc), fixed4(row->scores.overall),
                               std::to_string(rank)};
    if (with_dist)
      for (auto t : benchgen::kAllOptionTypes)
        c.push_back(row->distribution ? fixed4((*row->distribution)[t]) : std::string());
    cells.push_back(std::move(c));
  }

  std::string out;
  if (format == ReportFormat::Csv) {
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + csv_escape(v[i]);
      out += "\n";
    };
    line(columns);
    for (const auto& c : cells) line(c);
    return out;
  }
  auto line = [&](const std::vector<std::string>& v) {
    out += "|";
    for (const auto& s : v) out += " " + md_escape(s) + " |";
    out += "\n";
  };
  line(columns);
  out += "|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& c : cells) line(c);
  return out;
}

std::vector<ReportRow> parse_json_report(const std::string& document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("report is not a JSON object");
  try {
    std::vector<ReportRow> rows;
    for (const auto& j : doc.at("rows")) {
      ReportRow r;
      r.model = j.at("Model").get<std::string>();
      r.scores.entity_acc = j.at("Entity").get<double>();
      r.scores.relation_acc = j.at("Relation").get<double>();
      r.scores.attribute_acc = j.at("Attribute").get<double>();
      r.scores.overall = j.at("Overall").get<double>();
      if (j.contains("distribution")) {
        TypeDistribution d;
        for (auto t : benchgen::kAllOptionTypes)
          d.fractions[static_cast<std::size_t>(t)] = j["distribution"].at(std::string(benchgen::to_string(t))).get<double>();
        d.total = j.at("records").get<std::size_t>();
        r.distribution = d;
      }
      rows.push_back(std::move(r));
    }
    return rows;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace geohalu::scoring
