#include <doctest.h>

#include "geohalu/align/train.hpp"
#include "geohalu/alignset/dataset.hpp"
#include "geohalu/benchgen/generate.hpp"
#include "geohalu/error.hpp"
#include "geohalu/geokg/relations.hpp"
#include "mini_city.hpp"

using namespace geohalu;
using namespace geohalu::align;

namespace {

const SyntheticDataset& synthetic() {
  static const auto d = [] {
    SyntheticConfig c;
    c.seed = 4;
    c.facts_per_category = 20;
    c.answer_words = 12;
    return make_synthetic_dataset(c);
  }();
  return d;
}

TrainConfig quick(std::size_t steps) {
  TrainConfig c;
  c.steps = steps;
  c.eval_interval = 5;
  return c;
}

}  // namespace

TEST_CASE("one step is plain gradient descent on the batch loss") {
  const auto& s = synthetic();
  auto cfg = quick(1);
  cfg.lr = 3.0;
  const auto res = toy_train(s.initial, s.data.train, s.data.heldout, cfg);
  const auto out = dynamic_kto_loss(s.initial, s.data.train, cfg.loss);
  auto expected = s.initial.theta();
  for (std::size_t i = 0; i < expected.size(); ++i) expected[i] -= 3.0 * out.gradient[i];
  CHECK(res.policy.theta() == expected);
  CHECK(res.policy.ref() == s.initial.ref());
  REQUIRE(res.history.size() == 2);
  CHECK(res.history[0].step == 0);
  CHECK(res.history[0].loss == out.loss);
  CHECK(res.history[1].step == 1);
}

TEST_CASE("training lowers the loss and the held-out fact distance") {
  const auto& s = synthetic();
  const auto res = toy_train(s.initial, s.data.train, s.data.heldout, quick(60));
  CHECK(res.history.back().loss < res.history.front().loss);
  CHECK(res.history.back().fact_distance.macro < res.history.front().fact_distance.macro);
  CHECK(preference_accuracy(res.policy, s.data.heldout) > preference_accuracy(s.initial, s.data.heldout));
  std::vector<std::size_t> steps;
  for (const auto& h : res.history) steps.push_back(h.step);
  CHECK(steps == std::vector<std::size_t>{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60});
  const auto again = toy_train(s.initial, s.data.train, s.data.heldout, quick(60));
  CHECK(again.policy == res.policy);
}

TEST_CASE("sequential schedule trains tag by tag") {
  const auto& s = synthetic();
  auto cfg = quick(10);
  cfg.schedule = Schedule::Sequential;
  cfg.eval_interval = 1;
  const auto res = toy_train(s.initial, s.data.train, s.data.heldout, cfg);
  std::vector<Category> phases;
  for (const auto& h : res.history) {
    REQUIRE(h.phase.has_value());
    phases.push_back(*h.phase);
  }
  // 10 steps over three tags: 4, 3, 3, plus the closing evaluation.
  const std::vector<Category> expected{Category::Entity,    Category::Entity,    Category::Entity,   Category::Entity,
                                       Category::Relation,  Category::Relation,  Category::Relation, Category::Attribute,
                                       Category::Attribute, Category::Attribute, Category::Attribute};
  CHECK(phases == expected);

  // Training only on Entity samples leaves rows used solely by other tags alone.
  cfg.order = {Category::Entity};
  const auto only_e = toy_train(s.initial, s.data.train, s.data.heldout, cfg);
  SequenceBatch entity;
  for (const auto& smp : s.data.train.samples)
    if (smp.tag == Category::Entity) entity.samples.push_back(smp);
  assign_cyclic_partners(entity);
  auto mixed = cfg;
  mixed.schedule = Schedule::Mixed;
  CHECK(toy_train(s.initial, entity, s.data.heldout, mixed).policy == only_e.policy);

  const auto runs = compare_schedules(s.initial, s.data, quick(10));
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].schedule == Schedule::Mixed);
  CHECK(runs[1].schedule == Schedule::Sequential);
  const auto csv = schedule_report_csv(runs, cfg.order);
  CHECK(csv.rfind("Metric,Mixed,Sequential(E)\n", 0) == 0);
  CHECK(history_csv(res.history).rfind("step,loss,phase,Entity,Relation,Attribute,Macro,Std,SampleStd\n", 0) == 0);
}

TEST_CASE("validation") {
  const auto& s = synthetic();
  CHECK_THROWS_AS(toy_train(s.initial, s.data.train, s.data.heldout, quick(0)), ValidationError);
  auto bad = quick(3);
  bad.lr = 0.0;
  CHECK_THROWS_AS(toy_train(s.initial, s.data.train, s.data.heldout, bad), ValidationError);
  auto sample = quick(3);
  sample.loss.beta_policy = BetaPolicy::sample_level();
  CHECK_THROWS_AS(toy_train(s.initial, s.data.train, s.data.heldout, sample), ValidationError);
  const auto diag = fact_distance_diagnostics(s.initial, s.data.train, s.data.train_pairs);
  CHECK(diag.terms == fact_distance(s.initial, s.data.train_pairs).terms);
  CHECK_NOTHROW(toy_train(s.initial, s.data.train, s.data.heldout, sample, &diag));
  CHECK_THROWS_AS(fact_distance_diagnostics(s.initial, s.data.train, {}), ValidationError);
  CHECK(parse_schedule("sequential") == Schedule::Sequential);
  CHECK_FALSE(parse_schedule("random").has_value());
}

TEST_CASE("synthetic dataset shape") {
  const auto& s = synthetic();
  CHECK(s.data.train.size() == 120);
  CHECK(s.data.heldout.size() == 60);
  CHECK(s.initial.theta() == s.initial.ref());
  std::map<Category, int> n;
  for (const auto& smp : s.data.train.samples) ++n[smp.tag];
  for (auto c : benchgen::kAllCategories) CHECK(n[c] == 40);
  SyntheticConfig c;
  c.facts_per_category = 0;
  CHECK_THROWS_AS(make_synthetic_dataset(c), ValidationError);
  SyntheticConfig same;
  same.facts_per_category = 5;
  CHECK(make_synthetic_dataset(same).data.train == make_synthetic_dataset(same).data.train);
}

TEST_CASE("alignment samples become token sequences") {
  auto es = testing::mini_city_entities();
  auto edges = geokg::derive_relations(es, {});
  const auto g = geokg::build_graph("Lakeview", std::move(es), std::move(edges));
  benchgen::GenerationConfig bc;
  bc.set_all(5);
  const auto bench = benchgen::generate_benchmark(g, bc);
  alignset::AlignsetConfig ac;
  ac.entity_count = 3;
  ac.relation_count = 10;
  ac.attribute_count = 10;
  const auto samples = alignset::generate_alignment_dataset(g, bench, ac);
  const auto d = from_alignset(samples);
  REQUIRE(d.train.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(d.tokenizer.decode(d.train.samples[i].seq.prompt) == samples[i].prompt);
    CHECK(d.tokenizer.decode(d.train.samples[i].seq.completion) == samples[i].completion);
    CHECK(d.tokenizer.decode(d.train_pairs[i].factual) == samples[i].factual());
    CHECK(d.train.samples[i].desirable == (samples[i].label == alignset::Label::Desirable));
    CHECK(d.train.samples[i].partner == (i + 1) % samples.size());
  }
  auto broken = samples;
  broken[0].counterpart.clear();
  CHECK_THROWS_AS(from_alignset(broken), ValidationError);
}
