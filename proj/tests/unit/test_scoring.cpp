#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "geohalu/benchgen/generate.hpp"
#include "geohalu/error.hpp"
#include "geohalu/geokg/relations.hpp"
#include "geohalu/random.hpp"
#include "geohalu/scoring/scoring.hpp"
#include "mini_city.hpp"

using namespace geohalu;
using namespace geohalu::scoring;
using benchgen::Category;

namespace {

const std::vector<BenchmarkItem>& mini_bench() {
  static const auto items = [] {
    auto s = testing::mini_city_entities();
    auto edges = geokg::derive_relations(s, {});
    const auto g = geokg::build_graph("Lakeview", std::move(s), std::move(edges));
    benchgen::GenerationConfig c;
    c.seed = 7;
    c.set_all(10);
    return benchgen::generate_benchmark(g, c);
  }();
  return items;
}

// Straightforward per-category accuracy, independent of the library.
CategoryScores naive_scores(const std::vector<BenchmarkItem>& items, const std::vector<EvalRecord>& records) {
  std::map<std::string, OptionType> outcome;
  for (const auto& r : records) outcome[r.item_id] = r.outcome;
  std::map<Category, std::pair<double, double>> hit;
  for (const auto& it : items) {
    auto& h = hit[benchgen::category_of(it.task)];
    h.second += 1;
    auto o = outcome.find(it.item_id);
    if (o != outcome.end() && o->second == OptionType::Factual) h.first += 1;
  }
  auto acc = [&](Category c) { return hit[c].second == 0 ? 0.0 : hit[c].first / hit[c].second; };
  CategoryScores s{acc(Category::Entity), acc(Category::Relation), acc(Category::Attribute), 0.0};
  s.overall = (s.entity_acc + s.relation_acc + s.attribute_acc) / 3.0;
  return s;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compares against tests/golden/<name>; GEOHALU_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual) {
  const auto path = std::filesystem::path(GEOHALU_GOLDEN_DIR) / name;
  if (std::getenv("GEOHALU_UPDATE_GOLDEN")) std::ofstream(path, std::ios::binary) << actual;
  INFO(name);
  CHECK(read_file(path) == actual);
}

std::vector<ReportRow> golden_rows(int which) {
  auto dist = [](std::initializer_list<double> f, std::size_t total) {
    TypeDistribution d;
    std::copy(f.begin(), f.end(), d.fractions.begin());
    d.total = total;
    return d;
  };
  switch (which) {
    case 0: {
      const auto fx = testing::scoring_fixture();
      return {{"random", random_baseline(fx.items, 1, 50), std::nullopt},
              {"fixture-model", score_run(fx.items, fx.records), type_distribution(fx.records)}};
    }
    case 1:
      return {{"b|pipe", {0.5, 0.5, 0.5, 0.5}, std::nullopt},
              {"a,comma", {0.25, 0.75, 0.5, 0.5}, std::nullopt},
              {"z \"quoted\"", {0.9, 0.8, 0.7, 0.8}, std::nullopt}};
    default:
      return {{"solo", {1.0, 2.0 / 3.0, 0.0, 5.0 / 9.0}, dist({0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.0, 0.0}, 10)}};
  }
}

}  // namespace

TEST_CASE("fixture scores are the hand-computed accuracies") {
  const auto fx = testing::scoring_fixture();
  const auto s = score_run(fx.items, fx.records);
  CHECK(s.entity_acc == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.relation_acc == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.attribute_acc == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.overall == doctest::Approx(0.41667).epsilon(1e-5));
  CHECK(s.overall == doctest::Approx(1.25 / 3.0).epsilon(1e-12));
  CHECK(s == naive_scores(fx.items, fx.records));

  const auto d = type_distribution(fx.records);
  CHECK(d.total == 12);
  CHECK(d[OptionType::Factual] == doctest::Approx(5.0 / 12));
  CHECK(d[OptionType::InstructionViolation] == doctest::Approx(2.0 / 12));
  for (auto t : {OptionType::EntityFabrication, OptionType::EntityOmission, OptionType::RelationFabrication,
                 OptionType::RelationOmission, OptionType::AttributeConfusion})
    CHECK(d[t] == doctest::Approx(1.0 / 12));
  CHECK(d[OptionType::Abstain] == 0.0);
  double sum = 0;
  for (double f : d.fractions) sum += f;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("overall is a macro average") {
  auto fx = testing::scoring_fixture();
  const auto base = score_run(fx.items, fx.records);
  // Duplicating the attribute items (with their records) changes no category.
  const auto n = fx.items.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (benchgen::category_of(fx.items[i].task) != Category::Attribute) continue;
    for (int copy = 0; copy < 5; ++copy) {
      auto it = fx.items[i];
      it.item_id += "-dup" + std::to_string(copy);
      auto r = *std::find_if(fx.records.begin(), fx.records.end(), [&](const auto& x) { return x.item_id == fx.items[i].item_id; });
      r.item_id = it.item_id;
      fx.items.push_back(it);
      fx.records.push_back(r);
    }
  }
  CHECK(score_run(fx.items, fx.records) == base);
}

TEST_CASE("record order does not matter; missing records count as wrong") {
  const auto fx = testing::scoring_fixture();
  const auto base = score_run(fx.items, fx.records);
  std::mt19937_64 g(5);
  for (int k = 0; k < 20; ++k) {
    auto recs = fx.records;
    std::shuffle(recs.begin(), recs.end(), g);
    CHECK(score_run(fx.items, recs) == base);
  }
  CHECK(score_run({}, {}) == CategoryScores{});
  CHECK(type_distribution({}) == TypeDistribution{});

  auto fewer = fx.records;
  fewer.erase(std::remove_if(fewer.begin(), fewer.end(), [](const auto& r) { return r.outcome == OptionType::Factual; }),
              fewer.end());
  CHECK(score_run(fx.items, fewer) == CategoryScores{});
  CHECK(score_run(fx.items, fewer) == naive_scores(fx.items, fewer));
}

TEST_CASE("unknown and duplicated records are rejected") {
  const auto fx = testing::scoring_fixture();
  auto extra = fx.records;
  extra.push_back(extra[0]);
  CHECK_THROWS_AS(score_run(fx.items, extra), ValidationError);
  auto stranger = fx.records;
  stranger[0].item_id = "nowhere-PE-9999";
  CHECK_THROWS_AS(score_run(fx.items, stranger), ValidationError);
}

TEST_CASE("scores agree with the naive oracle on random runs") {
  const auto& items = mini_bench();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    eval::MockEndpoint m(eval::MockKind::UniformRandom, items, seed);
    std::vector<EvalRecord> recs;
    for (const auto& it : items)
      if ((seed + recs.size()) % 7 != 0) recs.push_back(eval::grade(it, m.complete(eval::render_prompt(it)), 0.0));
    const auto s = score_run(items, recs);
    const auto o = naive_scores(items, recs);
    CHECK(s.entity_acc == doctest::Approx(o.entity_acc).epsilon(1e-12));
    CHECK(s.relation_acc == doctest::Approx(o.relation_acc).epsilon(1e-12));
    CHECK(s.attribute_acc == doctest::Approx(o.attribute_acc).epsilon(1e-12));
    CHECK(s.overall == doctest::Approx(o.overall).epsilon(1e-12));
  }
}

TEST_CASE("random baseline replays the uniform mock") {
  const auto& items = mini_bench();
  const std::uint64_t seed = 42;
  const std::size_t trials = 12;
  CategoryScores mean;
  for (std::size_t t = 0; t < trials; ++t) {
    eval::MockEndpoint m(eval::MockKind::UniformRandom, items, derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<EvalRecord> recs;
    for (const auto& it : items) recs.push_back(eval::grade(it, m.complete(eval::render_prompt(it)), 0.0));
    const auto s = naive_scores(items, recs);
    mean.entity_acc += s.entity_acc / trials;
    mean.relation_acc += s.relation_acc / trials;
    mean.attribute_acc += s.attribute_acc / trials;
    mean.overall += s.overall / trials;
  }
  const auto b = random_baseline(items, seed, trials);
  CHECK(b.entity_acc == doctest::Approx(mean.entity_acc).epsilon(1e-12));
  CHECK(b.relation_acc == doctest::Approx(mean.relation_acc).epsilon(1e-12));
  CHECK(b.attribute_acc == doctest::Approx(mean.attribute_acc).epsilon(1e-12));
  CHECK(b.overall == doctest::Approx(mean.overall).epsilon(1e-12));

  // Three options each: the long-run mean sits at one third.
  const auto wide = random_baseline(items, 1, 400);
  CHECK(wide.overall == doctest::Approx(1.0 / 3).epsilon(0.03));
}

TEST_CASE("ranking and percentile shift") {
  const Ranking r = rank_models({{"m1", {0, 0, 0, 0.3}}, {"m2", {0, 0, 0, 0.6}}, {"m0", {0, 0, 0, 0.3}}, {"m3", {0, 0, 0, 0.1}}});
  REQUIRE(r.size() == 4);
  CHECK(r[0].model == "m2");
  CHECK(r[1].model == "m0");  // tie broken by name
  CHECK(r[2].model == "m1");
  CHECK(r[3].model == "m3");
  for (std::size_t i = 0; i < 4; ++i) CHECK(r[i].rank == i + 1);
  CHECK(r[0].percentile == 1.0);
  CHECK(r[3].percentile == 0.0);
  CHECK(r[1].percentile == doctest::Approx(2.0 / 3));
  CHECK(rank_models({{"only", {0, 0, 0, 0.2}}})[0].percentile == 1.0);
  CHECK(rank_models({}).empty());

  // Third of five moving to first gains half the percentile range.
  const Ranking a = rank_models({{"a", {0, 0, 0, 0.9}}, {"b", {0, 0, 0, 0.8}}, {"x", {0, 0, 0, 0.7}},
                                 {"d", {0, 0, 0, 0.6}}, {"e", {0, 0, 0, 0.5}}});
  const Ranking b = rank_models({{"a", {0, 0, 0, 0.6}}, {"b", {0, 0, 0, 0.8}}, {"x", {0, 0, 0, 0.95}},
                                 {"d", {0, 0, 0, 0.3}}, {"e", {0, 0, 0, 0.5}}, {"new", {0, 0, 0, 1.0}}});
  const auto shift = percentile_shift(a, b);
  REQUIRE(shift.size() == 5);
  const auto x = std::find_if(shift.begin(), shift.end(), [](const auto& s) { return s.model == "x"; });
  REQUIRE(x != shift.end());
  CHECK(x->rank_a == 3);
  CHECK(x->rank_b == 2);
  CHECK(x->percentile_a == doctest::Approx(0.5));
  CHECK(std::is_sorted(shift.begin(), shift.end(), [](const auto& l, const auto& r) { return l.model < r.model; }));

  const Ranking c = rank_models({{"a", {0, 0, 0, 0.6}}, {"b", {0, 0, 0, 0.8}}, {"x", {0, 0, 0, 0.95}},
                                 {"d", {0, 0, 0, 0.3}}, {"e", {0, 0, 0, 0.5}}});
  const auto s2 = percentile_shift(a, c);
  const auto x2 = std::find_if(s2.begin(), s2.end(), [](const auto& s) { return s.model == "x"; });
  CHECK(x2->rank_b == 1);
  CHECK(x2->delta == doctest::Approx(0.5));
}

TEST_CASE("report formats") {
  CHECK(parse_report_format("md") == ReportFormat::Markdown);
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK(parse_report_format("json") == ReportFormat::Json);
  CHECK_FALSE(parse_report_format("xml").has_value());

  CHECK(emit_report({}, ReportFormat::Csv) == "Model,Entity,Relation,Attribute,Overall,Ranking\n");
  CHECK(emit_report({}, ReportFormat::Markdown) ==
        "| Model | Entity | Relation | Attribute | Overall | Ranking |\n"
        "| --- | ---: | ---: | ---: | ---: | ---: |\n");
  CHECK(parse_json_report(emit_report({}, ReportFormat::Json)).empty());

  const char* names[] = {"fixture", "ties", "solo"};
  for (int k = 0; k < 3; ++k) {
    const auto rows = golden_rows(k);
    check_golden(std::string("report_") + names[k] + ".md", emit_report(rows, ReportFormat::Markdown));
    check_golden(std::string("report_") + names[k] + ".csv", emit_report(rows, ReportFormat::Csv));
    const auto js = emit_report(rows, ReportFormat::Json);
    check_golden(std::string("report_") + names[k] + ".json", js);
    auto back = parse_json_report(js);
    auto sorted = rows;
    std::vector<std::pair<std::string, CategoryScores>> named;
    for (const auto& r : rows) named.emplace_back(r.model, r.scores);
    const auto ranking = rank_models(named);
    std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& l, const auto& r) {
      auto pos = [&](const std::string& m) {
        return std::find_if(ranking.begin(), ranking.end(), [&](const auto& e) { return e.model == m; }) - ranking.begin();
      };
      return pos(l.model) < pos(r.model);
    });
    CHECK(back == sorted);
  }
  CHECK_THROWS_AS(parse_json_report("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_json_report("{\"rows\":[{\"Model\":3}]}"), ParseError);
}
