#include "geohalu/alignset/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "geohalu/benchgen/generate.hpp"
#include "geohalu/random.hpp"
#include "geohalu/text.hpp"

namespace geohalu::alignset {

using benchgen::FabricatorMode;
using geokg::EntityClass;
using geokg::Fact;
using geokg::GeoKnowledgeGraph;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Label l) { return l == Label::Desirable ? "Desirable" : "Undesirable"; }

Label parse_label(std::string_view s) {
  if (s == "Desirable") return Label::Desirable;
  if (s == "Undesirable") return Label::Undesirable;
  throw ParseError("unknown label '" + std::string(s) + "'");
}

std::size_t AlignsetConfig::category_count(Category c) const {
  switch (c) {
    case Category::Entity: return entity_count;
    case Category::Relation: return relation_count;
    case Category::Attribute: return attribute_count;
  }
  return 0;
}

void validate(const AlignsetConfig& c) {
  if (!(c.negative_ratio >= 0.0 && c.negative_ratio <= 1.0))
    throw ValidationError("negative_ratio must be in [0, 1]");
  if (!(c.theta_attr > 0.0)) throw ValidationError("theta_attr must be > 0");
  if (c.mode == FabricatorMode::LlmAssisted && c.client == nullptr)
    throw ValidationError("LLM-assisted fabrication needs an endpoint");
}

std::array<std::size_t, benchgen::kTaskCount> subtask_counts(const AlignsetConfig& c) {
  std::array<std::size_t, benchgen::kTaskCount> out{};
  for (auto cat : benchgen::kAllCategories) {
    std::vector<TaskKind> tasks;
    for (auto t : benchgen::kAllTasks)
      if (benchgen::category_of(t) == cat) tasks.push_back(t);
    const std::size_t total = c.category_count(cat);
    for (std::size_t i = 0; i < tasks.size(); ++i)
      out[static_cast<std::size_t>(tasks[i])] =
          total / tasks.size() + (i < total % tasks.size() ? 1 : 0);
  }
  return out;
}

namespace {

using Templates = std::array<const char*, kParaphraseVariants>;

// {c} = city, {s} = subject name.
Templates templates_for(TaskKind t) {
  switch (t) {
    case TaskKind::PoiExistence:
      return {"Name a POI (Point of Interest) in {c}.",
              "Tell me the name of a point of interest located in {c}.",
              "Can you give an example of a POI in {c}?"};
    case TaskKind::AoiExistence:
      return {"Name an AOI (Area of Interest) in {c}.",
              "Tell me the name of an area of interest located in {c}.",
              "Can you give an example of an AOI in {c}?"};
    case TaskKind::RoadExistence:
      return {"Name a road in {c}.", "Tell me the name of a road located in {c}.",
              "Can you give an example of a road in {c}?"};
    case TaskKind::PoiLocateAtAoi:
      return {"Which AOI (Area of Interest) in {c} is the following POI (Point of Interest) located in: {s}?",
              "In {c}, inside which area of interest can the point of interest {s} be found?",
              "{s} is a POI in {c}. Which AOI contains it?"};
    case TaskKind::PoiNearPoi:
      return {"Which POI (Point of Interest) in {c} is near the following POI: {s}?",
              "In {c}, name a point of interest close to {s}.",
              "{s} is a POI in {c}. Which POI is nearby?"};
    case TaskKind::AoiNearAoi:
      return {"Which AOI (Area of Interest) in {c} is near the following AOI: {s}?",
              "In {c}, name an area of interest close to {s}.",
              "{s} is an AOI in {c}. Which AOI is nearby?"};
    case TaskKind::AoiConnectToRoad:
      return {"Which road in {c} does the following AOI (Area of Interest) connect to: {s}?",
              "In {c}, name a road that runs along the area of interest {s}.",
              "{s} is an AOI in {c}. Which road connects to it?"};
    case TaskKind::RoadIntersectRoad:
      return {"Which road in {c} intersects the following road: {s}?",
              "In {c}, name a road that crosses {s}.",
              "{s} is a road in {c}. Which road intersects it?"};
    case TaskKind::PoiAddress:
      return {"What is the address of the following POI (Point of Interest) in {c}: {s}?",
              "Where is the point of interest {s} in {c}? Give its address.",
              "{s} is a POI in {c}. What is its address?"};
    case TaskKind::PoiCategory:
      return {"What category does the following POI (Point of Interest) in {c} belong to: {s}?",
              "In {c}, which category is the point of interest {s}?",
              "{s} is a POI in {c}. What kind of place is it?"};
    case TaskKind::AoiLandUse:
      return {"What is the land use type of the following AOI (Area of Interest) in {c}: {s}?",
              "In {c}, what is the area of interest {s} used for?",
              "{s} is an AOI in {c}. What is its land use?"};
    case TaskKind::AoiArea:
      return {"What is the area of the following AOI (Area of Interest) in {c}: {s}?",
              "How large is the area of interest {s} in {c}?",
              "{s} is an AOI in {c}. What is its area?"};
    case TaskKind::RoadLength:
      return {"What is the length of the following road in {c}: {s}?",
              "How long is the road {s} in {c}?",
              "{s} is a road in {c}. What is its length?"};
  }
  return {"", "", ""};
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

EntityClass existence_class(TaskKind t) {
  return t == TaskKind::PoiExistence   ? EntityClass::Poi
         : t == TaskKind::AoiExistence ? EntityClass::Aoi
                                       : EntityClass::Road;
}

}  // namespace

std::string render_prompt(TaskKind task, std::size_t variant, std::string_view city,
                          std::string_view subject) {
  if (variant >= kParaphraseVariants) throw ValidationError("paraphrase variant out of range");
  std::string s = templates_for(task)[variant];
  replace_all(s, "{c}", city);
  replace_all(s, "{s}", subject);
  return s;
}

std::vector<TrainingSample> generate_alignment_dataset(
    const GeoKnowledgeGraph& graph, const std::vector<benchgen::BenchmarkItem>& benchmark,
    const AlignsetConfig& config) {
  validate(config);
  std::unordered_set<std::string> reserved;
  for (const auto& item : benchmark) reserved.insert(item.fact_key);

  const auto counts = subtask_counts(config);
  const std::string slug = benchgen::city_slug(graph.city());
  std::vector<TrainingSample> out;

  for (auto task : benchgen::kAllTasks) {
    const std::size_t n = counts[static_cast<std::size_t>(task)];
    if (n == 0) continue;
    const std::uint64_t task_seed =
        derive_seed(config.seed, "align:" + std::string(benchgen::abbreviation(task)));
    try {
      // Facts not used by the benchmark, drawn without replacement.
      std::vector<Fact> pool;
      for (auto& f : geokg::pattern_population(graph, benchgen::pattern_of(task))) {
        std::vector<std::string> ids{f.head_id};
        if (!f.tail_id.empty()) ids.push_back(f.tail_id);
        if (!reserved.contains(benchgen::fact_key(task, ids))) pool.push_back(std::move(f));
      }
      if (pool.size() < n)
        throw PopulationError("needs " + std::to_string(n) + " facts outside the benchmark but only " +
                              std::to_string(pool.size()) + " are available");
      Rng draw(derive_seed(task_seed, "sample"));
      draw.shuffle(pool);
      pool.resize(n);

      std::vector<bool> negative(n, false);
      const auto n_neg = static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.negative_ratio));
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      Rng(derive_seed(task_seed, "labels")).shuffle(order);
      for (std::size_t i = 0; i < n_neg; ++i) negative[order[i]] = true;

      std::vector<std::string> fakes;
      if (benchgen::category_of(task) == Category::Entity) {
        std::vector<std::string> examples;
        for (std::size_t i = 0; i < pool.size() && examples.size() < 10; ++i)
          examples.push_back(graph.name_of(pool[i].head_id));
        auto cand = benchgen::fabricate_entity_names(existence_class(task), examples, 2 * n + 8,
                                                     config.mode, derive_seed(task_seed, "fabricate"),
                                                     config.client);
        fakes = benchgen::filter_against_kg(cand, graph);
        if (fakes.size() < n) throw PopulationError("could not fabricate enough novel names");
      }

      for (std::size_t i = 0; i < n; ++i) {
        const Fact& f = pool[i];
        const std::uint64_t s = derive_seed(task_seed, i);
        TrainingSample ts;
        char num[24];
        std::snprintf(num, sizeof num, "%04zu", i);
        ts.sample_id = slug + "-align-" + std::string(benchgen::abbreviation(task)) + "-" + num;
        ts.task_tag = benchgen::category_of(task);
        ts.subtask = task;
        ts.label = negative[i] ? Label::Undesirable : Label::Desirable;
        const std::size_t variant = config.paraphrase ? i % kParaphraseVariants : 0;
        std::string truth, falsehood;

        switch (ts.task_tag) {
          case Category::Entity:
            ts.head_id = f.head_id;
            ts.fact_key = benchgen::fact_key(task, {f.head_id});
            ts.prompt = render_prompt(task, variant, graph.city(), "");
            truth = graph.name_of(f.head_id);
            falsehood = fakes[i];
            break;
          case Category::Relation: {
            const auto kind = *benchgen::relation_of(task);
            std::string head = f.head_id, tail = f.tail_id;
            if (geokg::is_symmetric(kind) && Rng(derive_seed(s, "orient")).coin()) std::swap(head, tail);
            ts.head_id = head;
            ts.fact_key = benchgen::fact_key(task, {head, tail});
            ts.prompt = render_prompt(task, variant, graph.city(), graph.name_of(head));
            truth = graph.name_of(tail);
            falsehood = graph.name_of(
                benchgen::fabricate_relation(graph, head, kind, tail, derive_seed(s, "distractor")));
            break;
          }
          case Category::Attribute: {
            const auto attr = *benchgen::attribute_of(task);
            ts.head_id = f.head_id;
            ts.fact_key = benchgen::fact_key(task, {f.head_id});
            ts.prompt = render_prompt(task, variant, graph.city(), graph.name_of(f.head_id));
            truth = benchgen::attribute_display(graph, attr, f.head_id);
            if (geokg::is_numeric(attr)) {
              const double v = geokg::attribute_number(graph, attr, f.head_id);
              falsehood = benchgen::format_numeric_attribute(
                  attr, benchgen::confuse_numeric(v, config.theta_attr, derive_seed(s, "confuse"),
                                                  {benchgen::displayed_number(v)}));
            } else {
              falsehood = benchgen::confuse_attribute(graph, attr, truth, config.theta_attr,
                                                      derive_seed(s, "confuse"));
            }
            break;
          }
        }
        ts.completion = negative[i] ? falsehood : truth;
        ts.counterpart = negative[i] ? truth : falsehood;
        out.push_back(std::move(ts));
      }
    } catch (const PopulationError& e) {
      throw PopulationError("alignset subtask " + std::string(benchgen::to_string(task)) + ": " + e.what());
    }
  }
  return out;
}

LeakageReport leakage_check(const std::vector<TrainingSample>& samples,
                            const std::vector<benchgen::BenchmarkItem>& benchmark) {
  std::unordered_map<std::string, std::string> items;
  for (const auto& item : benchmark) items.emplace(item.fact_key, item.item_id);
  LeakageReport report;
  for (const auto& s : samples) {
    auto it = items.find(s.fact_key);
    if (it != items.end()) report.collisions.push_back({s.sample_id, it->second, s.fact_key});
  }
  report.clean = report.collisions.empty();
  return report;
}

std::string to_json_line(const TrainingSample& s) {
  ordered_json j;
  j["sample_id"] = s.sample_id;
  j["task"] = benchgen::task_tag(s.subtask);
  j["task_tag"] = benchgen::to_string(s.task_tag);
  j["subtask"] = benchgen::to_string(s.subtask);
  j["prompt"] = s.prompt;
  j["completion"] = s.completion;
  j["counterpart"] = s.counterpart;
  j["label"] = to_string(s.label);
  j["fact_key"] = s.fact_key;
  j["head_id"] = s.head_id;
  return j.dump();
}

TrainingSample sample_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("alignset sample is not a JSON object");
  try {
    TrainingSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    auto cat = benchgen::parse_category(j.at("task_tag").get<std::string>());
    auto task = benchgen::parse_task(j.at("subtask").get<std::string>());
    if (!cat || !task) throw ParseError("unknown task in sample " + s.sample_id);
    if (benchgen::category_of(*task) != *cat)
      throw ParseError("task_tag does not match subtask in sample " + s.sample_id);
    s.task_tag = *cat;
    s.subtask = *task;
    s.prompt = j.at("prompt").get<std::string>();
    s.completion = j.at("completion").get<std::string>();
    s.counterpart = j.value("counterpart", "");
    s.label = parse_label(j.at("label").get<std::string>());
    s.fact_key = j.at("fact_key").get<std::string>();
    s.head_id = j.value("head_id", "");
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed alignset sample: ") + e.what());
  }
}

void write_alignset(const std::vector<TrainingSample>& samples, const AlignsetHeader& header,
                    std::ostream& out) {
  ordered_json h;
  h["format"] = "geohalualign";
  h["version"] = kAlignFormatVersion;
  h["city"] = header.city;
  h["seed"] = header.seed;
  h["count"] = samples.size();
  out << h.dump() << '\n';
  for (const auto& s : samples) out << to_json_line(s) << '\n';
}

AlignsetFile read_alignset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("alignset file is empty");
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object() || h.value("format", "") != "geohalualign")
    throw ParseError("not a geohalualign file");
  if (h.value("version", -1) != kAlignFormatVersion) throw ParseError("unsupported geohalualign version");
  AlignsetFile file;
  try {
    file.header.city = h.at("city").get<std::string>();
    file.header.seed = h.at("seed").get<std::uint64_t>();
    file.header.count = h.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed alignset header: ") + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    file.samples.push_back(sample_from_json_line(line));
  }
  if (in.bad()) throw IoError("read error on alignset stream");
  if (file.samples.size() != file.header.count)
    throw ParseError("alignset file is truncated: header says " + std::to_string(file.header.count) +
                     " samples, found " + std::to_string(file.samples.size()));
  return file;
}

void save_alignset(const std::vector<TrainingSample>& samples, const AlignsetHeader& header,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write alignset file " + path.string());
  write_alignset(samples, header, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

AlignsetFile load_alignset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alignset file " + path.string());
  return read_alignset(in);
}

}  // namespace geohalu::alignset
