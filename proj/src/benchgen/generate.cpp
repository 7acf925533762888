#include "geohalu/benchgen/generate.hpp"

#include <cctype>
#include <cstdio>
#include <unordered_set>

#include "geohalu/random.hpp"
#include "geohalu/text.hpp"

namespace geohalu::benchgen {

using geokg::AttributeKind;
using geokg::EntityClass;
using geokg::Fact;
using geokg::GeoKnowledgeGraph;

std::array<std::size_t, kTaskCount> GenerationConfig::default_counts() {
  std::array<std::size_t, kTaskCount> c{};
  for (auto t : kAllTasks) {
    switch (category_of(t)) {
      case Category::Entity: c[static_cast<std::size_t>(t)] = 200; break;
      case Category::Relation: c[static_cast<std::size_t>(t)] = 250; break;
      case Category::Attribute: c[static_cast<std::size_t>(t)] = 50; break;
    }
  }
  return c;
}

std::size_t GenerationConfig::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

void validate(const GenerationConfig& c) {
  if (!(c.theta_attr > 0.0)) throw ValidationError("theta_attr must be > 0");
  if (c.mode == FabricatorMode::LlmAssisted && c.client == nullptr)
    throw ValidationError("LLM-assisted fabrication needs an endpoint");
}

std::string city_slug(std::string_view city) {
  std::string out;
  bool dash = false;
  for (char ch : city) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (dash && !out.empty()) out += '-';
      dash = false;
      out += static_cast<char>(std::tolower(u));
    } else {
      dash = true;
    }
  }
  return out.empty() ? "city" : out;
}

std::string make_item_id(std::string_view city, TaskKind task, std::size_t index) {
  char num[24];
  std::snprintf(num, sizeof num, "%04zu", index);
  return city_slug(city) + "-" + std::string(abbreviation(task)) + "-" + num;
}

std::string question_stem(TaskKind task, std::string_view city_v, std::string_view subject_v) {
  const std::string city(city_v), s(subject_v);
  switch (task) {
    case TaskKind::PoiExistence: return "Which of the following is a point of interest in " + city + "?";
    case TaskKind::AoiExistence: return "Which of the following is an area of interest in " + city + "?";
    case TaskKind::RoadExistence: return "Which of the following is a road in " + city + "?";
    case TaskKind::PoiLocateAtAoi:
      return "In " + city + ", which area of interest is the point of interest " + s + " located in?";
    case TaskKind::PoiNearPoi:
      return "In " + city + ", which point of interest is near the point of interest " + s + "?";
    case TaskKind::AoiNearAoi:
      return "In " + city + ", which area of interest is near the area of interest " + s + "?";
    case TaskKind::AoiConnectToRoad:
      return "In " + city + ", which road does the area of interest " + s + " connect to?";
    case TaskKind::RoadIntersectRoad:
      return "In " + city + ", which road intersects with the road " + s + "?";
    case TaskKind::PoiAddress:
      return "What is the address of the point of interest " + s + " in " + city + "?";
    case TaskKind::PoiCategory:
      return "What category does the point of interest " + s + " in " + city + " belong to?";
    case TaskKind::AoiLandUse:
      return "What is the land use type of the area of interest " + s + " in " + city + "?";
    case TaskKind::AoiArea:
      return "What is the area of the area of interest " + s + " in " + city + "?";
    case TaskKind::RoadLength: return "What is the length of the road " + s + " in " + city + "?";
  }
  return {};
}

std::string attribute_display(const GeoKnowledgeGraph& g, AttributeKind a, const std::string& id) {
  if (geokg::is_numeric(a))
    return format_numeric_attribute(a, displayed_number(geokg::attribute_number(g, a, id)));
  return geokg::attribute_text(g, a, id);
}

BenchmarkItem assemble_item(const ItemDraft& d, std::uint64_t rng_seed) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("cannot assemble item '" + d.item_id + "': " + why);
  };
  if (d.factual.text.empty()) fail("missing factual option");
  std::vector<DraftOption> opts{d.factual};
  opts.front().type = OptionType::Factual;
  const Category cat = category_of(d.task);
  if (cat == Category::Attribute) {
    if (d.distractors.size() != 2) fail("attribute items need two confused values");
    for (const auto& x : d.distractors)
      if (x.type != OptionType::AttributeConfusion) fail("attribute distractor must be AttributeConfusion");
  } else {
    const OptionType fab =
        cat == Category::Entity ? OptionType::EntityFabrication : OptionType::RelationFabrication;
    const OptionType omit =
        cat == Category::Entity ? OptionType::EntityOmission : OptionType::RelationOmission;
    if (d.distractors.size() != 1 || d.distractors[0].type != fab)
      fail("expected exactly one " + std::string(to_string(fab)) + " distractor");
    opts.push_back(d.distractors[0]);
    opts.push_back({std::string(kNoneOfTheOthers), omit, {}});
  }
  if (cat == Category::Attribute) opts.insert(opts.end(), d.distractors.begin(), d.distractors.end());

  std::unordered_set<std::string> texts;
  for (const auto& o : opts) {
    if (o.text.empty()) fail("empty option text");
    if (!texts.insert(normalize_name(o.text)).second) fail("duplicate option text '" + o.text + "'");
  }

  Rng rng(rng_seed);
  rng.shuffle(opts);

  BenchmarkItem item;
  item.item_id = d.item_id;
  item.city = d.city;
  item.task = d.task;
  item.question = question_stem(d.task, d.city, d.subject);
  item.head_id = d.head_id;
  item.fact_key = d.fact_key;
  for (std::size_t i = 0; i < opts.size(); ++i) {
    Option o{std::string(1, static_cast<char>('A' + i)), opts[i].text, opts[i].type, opts[i].entity_id};
    if (o.type == OptionType::Factual) item.answer_label = o.label;
    item.options.push_back(std::move(o));
  }
  item.instruction = instruction_for(item.labels());
  validate(item);
  return item;
}

BenchmarkItem make_abstain_variant(const BenchmarkItem& item) {
  if (item.variant == Variant::Abstain)
    throw ValidationError("item '" + item.item_id + "' is already an abstain item");
  BenchmarkItem out = item;
  out.options.push_back({std::string(1, static_cast<char>('A' + item.options.size())),
                         std::string(kCannotDetermine), OptionType::Abstain, {}});
  out.variant = Variant::Abstain;
  out.instruction = instruction_for(out.labels());
  return out;
}

BenchmarkItem strip_abstain(const BenchmarkItem& item) {
  if (item.variant != Variant::Abstain || item.options.empty() ||
      item.options.back().type != OptionType::Abstain)
    throw ValidationError("item '" + item.item_id + "' is not an abstain item");
  BenchmarkItem out = item;
  out.options.pop_back();
  out.variant = Variant::Standard;
  out.instruction = instruction_for(out.labels());
  return out;
}

namespace {

struct TaskContext {
  const GeoKnowledgeGraph& g;
  const GenerationConfig& cfg;
  TaskKind task;
  std::uint64_t seed;
};

// Fresh fabricated names for every existence item: none exists in the
// graph and none repeats within the task.
std::vector<std::string> fabricated_pool(const TaskContext& ctx, const std::vector<Fact>& facts) {
  const EntityClass cls = ctx.task == TaskKind::PoiExistence   ? EntityClass::Poi
                          : ctx.task == TaskKind::AoiExistence ? EntityClass::Aoi
                                                               : EntityClass::Road;
  std::vector<std::string> examples;
  for (std::size_t i = 0; i < facts.size() && examples.size() < 10; ++i)
    examples.push_back(ctx.g.name_of(facts[i].head_id));

  const std::size_t n = facts.size();
  std::size_t want = n + n / 2 + 8;
  for (int round = 0; round < 4; ++round, want *= 2) {
    auto cand = fabricate_entity_names(cls, examples, want, ctx.cfg.mode,
                                       derive_seed(ctx.seed, "fabricate"), ctx.cfg.client);
    auto survivors = filter_against_kg(cand, ctx.g);
    if (survivors.size() >= n) {
      survivors.resize(n);
      return survivors;
    }
    if (ctx.cfg.mode == FabricatorMode::LlmAssisted) break;
  }
  throw PopulationError("could not fabricate " + std::to_string(n) + " novel names");
}

BenchmarkItem existence_item(const TaskContext& ctx, const Fact& f, const std::string& fake,
                             std::size_t index) {
  ItemDraft d;
  d.task = ctx.task;
  d.city = ctx.g.city();
  d.item_id = make_item_id(d.city, ctx.task, index);
  d.fact_key = fact_key(ctx.task, {f.head_id});
  d.factual = {ctx.g.name_of(f.head_id), OptionType::Factual, f.head_id};
  d.distractors = {{fake, OptionType::EntityFabrication, {}}};
  return assemble_item(d, derive_seed(derive_seed(ctx.seed, index), "shuffle"));
}

BenchmarkItem relation_item(const TaskContext& ctx, const Fact& f, std::size_t index) {
  const auto kind = *relation_of(ctx.task);
  const std::uint64_t item_seed = derive_seed(ctx.seed, index);
  std::string head = f.head_id, tail = f.tail_id;
  if (geokg::is_symmetric(kind) && Rng(derive_seed(item_seed, "orient")).coin()) std::swap(head, tail);
  const std::string fake = fabricate_relation(ctx.g, head, kind, tail, derive_seed(item_seed, "distractor"));

  ItemDraft d;
  d.task = ctx.task;
  d.city = ctx.g.city();
  d.item_id = make_item_id(d.city, ctx.task, index);
  d.head_id = head;
  d.subject = ctx.g.name_of(head);
  d.fact_key = fact_key(ctx.task, {head, tail});
  d.factual = {ctx.g.name_of(tail), OptionType::Factual, tail};
  d.distractors = {{ctx.g.name_of(fake), OptionType::RelationFabrication, fake}};
  return assemble_item(d, derive_seed(item_seed, "shuffle"));
}

BenchmarkItem attribute_item(const TaskContext& ctx, const Fact& f, std::size_t index) {
  const auto attr = *attribute_of(ctx.task);
  const std::uint64_t item_seed = derive_seed(ctx.seed, index);
  const std::string truth = attribute_display(ctx.g, attr, f.head_id);

  std::vector<std::string> wrong;
  if (geokg::is_numeric(attr)) {
    const double value = geokg::attribute_number(ctx.g, attr, f.head_id);
    std::vector<double> exclude{displayed_number(value)};
    for (int k = 0; k < 2; ++k) {
      const double v = confuse_numeric(value, ctx.cfg.theta_attr, derive_seed(item_seed, 10u + k), exclude);
      exclude.push_back(v);
      wrong.push_back(format_numeric_attribute(attr, v));
    }
  } else {
    for (int k = 0; k < 2; ++k)
      wrong.push_back(confuse_attribute(ctx.g, attr, truth, ctx.cfg.theta_attr,
                                        derive_seed(item_seed, 10u + k), wrong));
  }

  ItemDraft d;
  d.task = ctx.task;
  d.city = ctx.g.city();
  d.item_id = make_item_id(d.city, ctx.task, index);
  d.head_id = f.head_id;
  d.subject = ctx.g.name_of(f.head_id);
  d.fact_key = fact_key(ctx.task, {f.head_id});
  d.factual = {truth, OptionType::Factual, {}};
  for (auto& w : wrong) d.distractors.push_back({std::move(w), OptionType::AttributeConfusion, {}});
  return assemble_item(d, derive_seed(item_seed, "shuffle"));
}

}  // namespace

std::vector<BenchmarkItem> generate_benchmark(const GeoKnowledgeGraph& graph,
                                              const GenerationConfig& config) {
  validate(config);
  std::vector<BenchmarkItem> items;
  items.reserve(config.total());
  for (auto task : kAllTasks) {
    const std::size_t n = config.count(task);
    if (n == 0) continue;
    TaskContext ctx{graph, config, task,
                    derive_seed(config.seed, "task:" + std::string(abbreviation(task)))};
    try {
      const auto facts = geokg::sample_pattern(graph, pattern_of(task), n, derive_seed(ctx.seed, "sample"));
      switch (category_of(task)) {
        case Category::Entity: {
          const auto fakes = fabricated_pool(ctx, facts);
          for (std::size_t i = 0; i < n; ++i) items.push_back(existence_item(ctx, facts[i], fakes[i], i));
          break;
        }
        case Category::Relation:
          for (std::size_t i = 0; i < n; ++i) items.push_back(relation_item(ctx, facts[i], i));
          break;
        case Category::Attribute:
          for (std::size_t i = 0; i < n; ++i) items.push_back(attribute_item(ctx, facts[i], i));
          break;
      }
    } catch (const PopulationError& e) {
      throw PopulationError("task " + std::string(to_string(task)) + ": " + e.what());
    }
  }
  return items;
}

BenchmarkHeader make_header(const GeoKnowledgeGraph& graph, const GenerationConfig& config,
                            Variant variant, std::size_t count) {
  return {graph.city(), variant, config.seed, count};
}

}  // namespace geohalu::benchgen
