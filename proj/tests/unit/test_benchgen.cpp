#include <doctest.h>

#include <sstream>

#include "geohalu/benchgen/generate.hpp"
#include "geohalu/error.hpp"
#include "geohalu/geokg/relations.hpp"
#include "invariants.hpp"
#include "mini_city.hpp"

using namespace geohalu;
using namespace geohalu::benchgen;

namespace {

geokg::GeoKnowledgeGraph mini_graph() {
  auto s = testing::mini_city_entities();
  auto edges = geokg::derive_relations(s, {});
  return geokg::build_graph("Lakeview", std::move(s), std::move(edges));
}

GenerationConfig mini_config(std::uint64_t seed) {
  GenerationConfig c;
  c.seed = seed;
  c.set_all(10);
  return c;
}

ItemDraft figure_draft() {
  ItemDraft d;
  d.task = TaskKind::PoiExistence;
  d.city = "Beijing";
  d.item_id = make_item_id("Beijing", TaskKind::PoiExistence, 0);
  d.fact_key = fact_key(TaskKind::PoiExistence, {"poi_7"});
  d.factual = {"Haidian Library", OptionType::Factual, "poi_7"};
  d.distractors = {{"Silver Spoon Cafe", OptionType::EntityFabrication, {}}};
  return d;
}

}  // namespace

TEST_CASE("taxonomy shape") {
  std::map<Category, int> n;
  for (auto t : kAllTasks) ++n[category_of(t)];
  CHECK(n[Category::Entity] == 3);
  CHECK(n[Category::Relation] == 5);
  CHECK(n[Category::Attribute] == 5);
  CHECK(GenerationConfig{}.total() == 2100);
  CHECK(abbreviation(TaskKind::RoadIntersectRoad) == "RCoR");
  CHECK(task_tag(TaskKind::PoiCategory) == "[POI_Category]");
  CHECK(fact_key(TaskKind::PoiNearPoi, {"b", "a"}) == "PoiNearPoi|a,b|-");
}

TEST_CASE("assemble_item follows the three-option layout") {
  const auto item = assemble_item(figure_draft(), 42);
  CHECK(item.question == "Which of the following is a point of interest in Beijing?");
  CHECK(item.instruction == "Please select from A, B, C. Output your answer directly");
  REQUIRE(item.options.size() == 3);
  std::map<std::string, OptionType> by_text;
  for (const auto& o : item.options) by_text[o.text] = o.type;
  CHECK(by_text["Haidian Library"] == OptionType::Factual);
  CHECK(by_text["Silver Spoon Cafe"] == OptionType::EntityFabrication);
  CHECK(by_text[std::string(kNoneOfTheOthers)] == OptionType::EntityOmission);
  CHECK(item.find_option(item.answer_label)->text == "Haidian Library");
  CHECK(item == assemble_item(figure_draft(), 42));

  std::set<std::string> orders;
  for (std::uint64_t s = 0; s < 40; ++s) {
    std::string order;
    for (const auto& o : assemble_item(figure_draft(), s).options) order += o.text.substr(0, 1);
    orders.insert(order);
  }
  CHECK(orders.size() == 6);  // every permutation of three options shows up

  auto missing = figure_draft();
  missing.distractors.clear();
  CHECK_THROWS_AS(assemble_item(missing, 1), ValidationError);
  auto wrong = figure_draft();
  wrong.distractors[0].type = OptionType::AttributeConfusion;
  CHECK_THROWS_AS(assemble_item(wrong, 1), ValidationError);
}

TEST_CASE("attribute items carry two confusions and no void option") {
  ItemDraft d;
  d.task = TaskKind::AoiLandUse;
  d.city = "Lakeview";
  d.item_id = "x";
  d.head_id = "aoi-00";
  d.subject = "Amber Court";
  d.factual = {"residential", OptionType::Factual, {}};
  d.distractors = {{"industrial", OptionType::AttributeConfusion, {}}, {"public", OptionType::AttributeConfusion, {}}};
  const auto item = assemble_item(d, 3);
  for (const auto& o : item.options) CHECK(o.text != kNoneOfTheOthers);
}

TEST_CASE("abstain variant") {
  const auto item = assemble_item(figure_draft(), 42);
  const auto ab = make_abstain_variant(item);
  REQUIRE(ab.options.size() == 4);
  CHECK(ab.options.back().text == kCannotDetermine);
  CHECK(ab.options.back().type == OptionType::Abstain);
  CHECK(ab.options.back().label == "D");
  CHECK(ab.answer_label == item.answer_label);
  CHECK(ab.instruction == "Please select from A, B, C, D. Output your answer directly");
  CHECK(ab.variant == Variant::Abstain);
  CHECK_THROWS_AS(make_abstain_variant(ab), ValidationError);
  CHECK(strip_abstain(ab) == item);
}

TEST_CASE("mini-city benchmark passes the exhaustive invariant scan") {
  const auto g = mini_graph();
  for (std::uint64_t seed : {1, 7, 2024}) {
    const auto items = generate_benchmark(g, mini_config(seed));
    CHECK(items.size() == 130);
    std::map<TaskKind, int> per_task;
    for (const auto& it : items) ++per_task[it.task];
    for (auto t : kAllTasks) CHECK(per_task[t] == 10);
    const auto bad = testing::scan_benchmark(g, items, 0.5);
    for (const auto& b : bad) INFO(b);
    CHECK(bad.empty());
    for (const auto& it : items) CHECK(strip_abstain(make_abstain_variant(it)) == it);
  }
}

TEST_CASE("generation is byte-identical for a seed") {
  const auto g = mini_graph();
  const auto cfg = mini_config(7);
  const auto a = benchmark_to_string(generate_benchmark(g, cfg), make_header(g, cfg, Variant::Standard, 130));
  const auto b = benchmark_to_string(generate_benchmark(g, cfg), make_header(g, cfg, Variant::Standard, 130));
  CHECK(a == b);
  const auto cfg2 = mini_config(8);
  CHECK(a != benchmark_to_string(generate_benchmark(g, cfg2), make_header(g, cfg2, Variant::Standard, 130)));
}

TEST_CASE("empty config, shortfalls and file round-trip") {
  const auto g = mini_graph();
  GenerationConfig zero;
  zero.set_all(0);
  CHECK(generate_benchmark(g, zero).empty());

  GenerationConfig too_many = mini_config(1);
  too_many.set_count(TaskKind::RoadExistence, 13);
  try {
    generate_benchmark(g, too_many);
    FAIL("expected PopulationError");
  } catch (const PopulationError& e) {
    CHECK(std::string(e.what()).find("RoadExistence") != std::string::npos);
  }

  const auto cfg = mini_config(3);
  const auto items = generate_benchmark(g, cfg);
  std::stringstream ss;
  write_benchmark(items, make_header(g, cfg, Variant::Standard, items.size()), ss);
  const auto back = read_benchmark(ss);
  CHECK(back.items == items);
  CHECK(back.header.city == "Lakeview");
  CHECK(back.header.seed == 3);

  std::string text = benchmark_to_string(items, make_header(g, cfg, Variant::Standard, items.size()));
  std::istringstream truncated(text.substr(0, text.size() - text.size() / 3));
  CHECK_THROWS_AS(read_benchmark(truncated), ParseError);
}
