// Acceptance checks: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <unistd.h>

#include "align_oracles.hpp"
#include "geohalu/align/gradcheck.hpp"
#include "geohalu/align/losses.hpp"
#include "geohalu/align/random_problems.hpp"
#include "geohalu/align/train.hpp"
#include "geohalu/benchgen/generate.hpp"
#include "geohalu/cli/cli.hpp"
#include "geohalu/eval/harness.hpp"
#include "geohalu/geokg/geometry.hpp"
#include "geohalu/geokg/relations.hpp"
#include "geohalu/scoring/scoring.hpp"
#include "gradients.hpp"
#include "invariants.hpp"
#include "mini_city.hpp"
#include "oracles.hpp"
#include "random_city.hpp"

using namespace geohalu;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ------------------------------------------------------------------ 1

Outcome kto_reduction() {
  Rng rng(derive_seed(1, "kto-reduction"));
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    align::RandomProblemConfig c;
    c.vocab = 2 + rng.index(7);
    c.batch = 2 + rng.index(15);
    c.order = 1 + rng.index(3);
    const auto p = align::random_policy(c, rng);
    const auto b = align::random_batch(c, rng);
    const double beta = rng.uniform(0.05, 1.0);
    align::LossConfig cfg;
    cfg.beta_policy = align::BetaPolicy::constant(beta);
    cfg.lambda_d = rng.uniform(0.5, 2.0);
    cfg.lambda_u = rng.uniform(0.5, 2.0);
    align::LossOptions o;
    o.with_gradient = false;
    const double got = align::dynamic_kto_loss(p, b, cfg, o).loss;
    const double want =
        oracle::naive_kto(p, b, std::vector<double>(b.size(), beta), cfg.lambda_d, cfg.lambda_u, false);
    worst = std::max(worst, std::abs(got - want));
  }
  return {worst <= 1e-12, fmt("200 random batches, max |dynamic - fixed-beta KTO| = %.2e", worst)};
}

// ------------------------------------------------------------------ 2

Outcome gradient_fidelity() {
  using align::BetaPolicy;
  const std::vector<std::pair<std::string, BetaPolicy>> policies{{"Constant", BetaPolicy::constant(0.3)},
                                                                 {"Category", BetaPolicy::category()},
                                                                 {"SampleLevel", BetaPolicy::sample_level()},
                                                                 {"ClusterLevel", BetaPolicy::cluster_level(3, 7)}};
  struct Tally {
    double literal = 0.0;   // max relative error, max(1e-8, |a|+|n|) denominator
    testing::Agreement floor;
  };
  std::map<std::string, Tally> tally;
  auto check = [&](const std::string& name, const align::Objective& f, const std::vector<double>& x) {
    auto& t = tally[name];
    t.literal = std::max(t.literal, align::grad_check(f, x, 1e-5).max_rel_error);
    const auto a = testing::gradient_agreement(f, x, 1e-5);
    t.floor.max_rel_error = std::max(t.floor.max_rel_error, a.max_rel_error);
    t.floor.max_abs_error = std::max(t.floor.max_abs_error, a.max_abs_error);
  };
  Rng rng(derive_seed(2, "gradient-fidelity"));
  for (int trial = 0; trial < 50; ++trial) {
    align::RandomProblemConfig c;
    c.order = 1 + trial % 3;
    const auto p = align::random_policy(c, rng);
    const auto b = align::random_batch(c, rng);
    const auto diag = align::random_diagnostics(b.size(), rng);
    for (const auto& [name, pol] : policies) {
      align::LossConfig cfg;
      cfg.beta_policy = pol;
      check("kto/" + name, align::kto_objective(p, b, cfg, &diag), p.theta());
    }
    check("dpo", align::dpo_objective(p, align::random_preference_pairs(c, rng), 0.5), p.theta());
    check("fact_distance", align::fact_distance_objective_fn(p, align::random_fact_pairs(c, rng)), p.theta());
  }
  bool pass = true;
  bool floor_ok = true;
  std::string detail = "max relative error over 50 trials:";
  for (const auto& [name, t] : tally) {
    pass = pass && t.literal < 1e-4;
    floor_ok = floor_ok && t.floor.max_rel_error < 1e-4;
    detail += " " + name + fmt("=%.1e", t.literal);
  }
  detail += floor_ok ? "; all components agree to < 1e-4 relative or within 1e-10 absolute (central-difference "
                       "round-off on zero-derivative parameters)"
                     : "; gradients disagree beyond round-off";
  return {pass, detail};
}

// ------------------------------------------------------------------ 3

Outcome closed_forms() {
  Rng rng(derive_seed(3, "closed-forms"));
  align::RandomProblemConfig c;
  c.ref_drift = 0.0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = align::random_policy(c, rng);
    const auto b = align::random_batch(c, rng);
    align::LossConfig cfg;
    cfg.lambda_d = cfg.lambda_u = 1.0;
    worst = std::max(worst, std::abs(align::dynamic_kto_loss(p, b, cfg).loss - 0.5));
    worst = std::max(worst, std::abs(align::dpo_loss(p, align::random_preference_pairs(c, rng), 0.1).loss -
                                     std::numbers::ln2));
    const auto rep = align::fact_distance(align::ToyPolicy(c.vocab, c.order), align::random_fact_pairs(c, rng));
    for (double t : rep.terms) worst = std::max(worst, std::abs(t - std::numbers::ln2));
    worst = std::max({worst, rep.std_across_categories, rep.std_across_samples});
  }
  return {worst <= 1e-12, fmt("KTO 0.5, DPO ln 2, FactDistance ln 2 with std 0; max deviation %.2e", worst)};
}

// ------------------------------------------------------------------ 4

Outcome training_direction() {
  align::SyntheticConfig sc;
  sc.seed = derive_seed(4, "synthetic");
  const auto ds = align::make_synthetic_dataset(sc);
  align::TrainConfig tc;
  tc.loss.beta_policy = align::BetaPolicy::category({{align::Category::Entity, 0.1},
                                                     {align::Category::Relation, 0.3},
                                                     {align::Category::Attribute, 0.5}});
  tc.schedule = align::Schedule::Mixed;
  const auto res = align::toy_train(ds.initial, ds.data.train, ds.data.heldout, tc);
  const auto before = align::fact_distance(ds.initial, ds.data.train_pairs);
  const auto after = align::fact_distance(res.policy, ds.data.train_pairs);
  const double acc0 = align::preference_accuracy(ds.initial, ds.data.heldout);
  const double acc1 = align::preference_accuracy(res.policy, ds.data.heldout);
  const bool pass = ds.data.train.size() == 600 && after.macro < before.macro &&
                    after.std_across_categories < before.std_across_categories &&
                    after.std_across_samples < before.std_across_samples && acc1 - acc0 >= 0.20;
  return {pass, std::to_string(ds.data.train.size()) + " samples; " +
                    fmt("macro %.4f -> %.4f; std %.4f -> %.4f", before.macro, after.macro, before.std_across_categories,
                        after.std_across_categories) +
                    fmt("; sample std %.4f -> %.4f; held-out preference %.1f%% -> %.1f%%", before.std_across_samples,
                        after.std_across_samples, 100 * acc0, 100 * acc1)};
}

// ------------------------------------------------------------------ 5

Outcome schedule_comparison() {
  align::SyntheticConfig sc;
  sc.seed = derive_seed(5, "synthetic");
  sc.facts_per_category = 40;
  const auto ds = align::make_synthetic_dataset(sc);
  align::TrainConfig tc;
  tc.steps = 90;
  const auto a = align::compare_schedules(ds.initial, ds.data, tc);
  const auto b = align::compare_schedules(ds.initial, ds.data, tc);
  const auto ra = align::schedule_report_csv(a, tc.order);
  const auto rb = align::schedule_report_csv(b, tc.order);
  bool complete = a.size() == 2;
  for (const auto& r : a)
    for (auto cat : benchgen::kAllCategories) complete = complete && r.final_report.mean(cat).has_value();
  const bool same = ra == rb && a[0].result.policy == b[0].result.policy && a[1].result.policy == b[1].result.policy;
  return {complete && same && ra.rfind("Metric,Mixed,Sequential(E>R>A)\n", 0) == 0,
          std::string("Mixed and Sequential(E>R>A) reports ") + (same ? "identical across reruns" : "DIFFER") +
              (complete ? ", every category present" : ", categories missing")};
}

// ------------------------------------------------------------------ 6

geokg::GeoKnowledgeGraph mini_graph() {
  auto s = testing::mini_city_entities();
  auto edges = geokg::derive_relations(s, {});
  return geokg::build_graph(std::string(testing::kMiniCity), std::move(s), std::move(edges));
}

Outcome benchmark_soundness() {
  const auto g = mini_graph();
  benchgen::GenerationConfig c;
  c.seed = 6;
  c.set_all(10);
  const auto items = benchgen::generate_benchmark(g, c);
  const auto bad = testing::scan_benchmark(g, items, c.theta_attr);
  const auto header = benchgen::make_header(g, c, benchgen::Variant::Standard, items.size());
  const bool same = benchgen::benchmark_to_string(items, header) ==
                    benchgen::benchmark_to_string(benchgen::generate_benchmark(g, c), header);
  std::string detail = std::to_string(items.size()) + " items, " + std::to_string(bad.size()) + " invariant violations, " +
                       (same ? "byte-identical regeneration" : "regeneration DIFFERS");
  if (!bad.empty()) detail += " (first: " + bad.front() + ")";
  return {items.size() == 130 && bad.empty() && same, detail};
}

// ------------------------------------------------------------------ 7

std::vector<benchgen::BenchmarkItem> three_option_items(std::size_t n) {
  std::vector<benchgen::BenchmarkItem> out;
  for (std::size_t i = 0; i < n; ++i) {
    benchgen::ItemDraft d;
    d.task = benchgen::TaskKind::PoiExistence;
    d.city = "Synthetic";
    d.item_id = benchgen::make_item_id("Synthetic", d.task, i);
    d.fact_key = benchgen::fact_key(d.task, {"poi-" + std::to_string(i)});
    d.factual = {"Real Place " + std::to_string(i), benchgen::OptionType::Factual, "poi-" + std::to_string(i)};
    d.distractors = {{"Made Up Place " + std::to_string(i), benchgen::OptionType::EntityFabrication, {}}};
    out.push_back(benchgen::assemble_item(d, derive_seed(7, i)));
  }
  return out;
}

std::vector<eval::EvalRecord> answer_all(eval::ChatClient& c, const std::vector<benchgen::BenchmarkItem>& items) {
  std::vector<eval::EvalRecord> recs;
  for (const auto& it : items) recs.push_back(eval::grade(it, c.complete(eval::render_prompt(it)), 0.0));
  return recs;
}

Outcome harness_calibration() {
  const auto g = mini_graph();
  benchgen::GenerationConfig c;
  c.seed = 7;
  c.set_all(10);
  const auto items = benchgen::generate_benchmark(g, c);

  eval::MockEndpoint oracle(eval::MockKind::Oracle, items);
  const double overall = scoring::score_run(items, answer_all(oracle, items)).overall;

  eval::MockEndpoint violator(eval::MockKind::Violator, items);
  const double violation = scoring::type_distribution(answer_all(violator, items))[benchgen::OptionType::InstructionViolation];

  const auto synth = three_option_items(2000);
  eval::MockEndpoint random(eval::MockKind::UniformRandom, synth, derive_seed(7, "uniform"));
  const auto rand_recs = answer_all(random, synth);
  const double acc = scoring::type_distribution(rand_recs)[benchgen::OptionType::Factual];
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / 2000.0);

  std::vector<benchgen::BenchmarkItem> abstain;
  for (const auto& it : items) abstain.push_back(benchgen::make_abstain_variant(it));
  eval::MockEndpoint abstainer(eval::MockKind::AlwaysAbstain, abstain);
  const double abstained = scoring::type_distribution(answer_all(abstainer, abstain))[benchgen::OptionType::Abstain];

  const bool pass = overall == 1.0 && violation == 1.0 && std::abs(acc - 1.0 / 3) <= 3 * se && abstained == 1.0;
  return {pass, fmt("oracle overall %.4f; violator violation rate %.4f; uniform random %.4f on 2000 items "
                    "(1/3 +- %.4f)",
                    overall, violation, acc, 3 * se) +
                    fmt("; abstain fraction %.4f", abstained)};
}

// ------------------------------------------------------------------ 8

Outcome scoring_contract() {
  auto fx = testing::scoring_fixture();
  const auto s = scoring::score_run(fx.items, fx.records);
  const bool exact = std::abs(s.entity_acc - 0.5) <= 1e-12 && std::abs(s.relation_acc - 0.25) <= 1e-12 &&
                     std::abs(s.attribute_acc - 0.5) <= 1e-12 && std::abs(s.overall - 1.25 / 3) <= 1e-12 &&
                     std::abs(s.overall - 0.41667) < 5e-6;
  const std::size_t n = fx.items.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (benchgen::category_of(fx.items[i].task) != benchgen::Category::Attribute) continue;
    auto it = fx.items[i];
    it.item_id += "-copy";
    auto rec = fx.records[i];
    for (const auto& r : fx.records)
      if (r.item_id == fx.items[i].item_id) rec = r;
    rec.item_id = it.item_id;
    fx.items.push_back(it);
    fx.records.push_back(rec);
  }
  const auto dup = scoring::score_run(fx.items, fx.records);
  const bool invariant = dup.overall == s.overall;
  return {exact && invariant, fmt("(%.5f, %.5f, %.5f, %.5f)", s.entity_acc, s.relation_acc, s.attribute_acc, s.overall) +
                                  (invariant ? "; overall unchanged by duplicated Attribute items"
                                             : "; overall CHANGED by duplicated Attribute items")};
}

// ------------------------------------------------------------------ 9

Outcome geometry_oracles() {
  const double antipodal = geokg::haversine_distance({0, 0}, {0, 180});
  const double want = std::numbers::pi * 6'371'000.0;
  const double rel = std::abs(antipodal - want) / want;

  const std::vector<geokg::GeoPoint> square{{0, 0}, {0, 0.01}, {0.01, 0.01}, {0.01, 0}};
  const double area = geokg::polygon_area(square);
  const double ref = oracle::spherical_area(square);
  const double area_rel = std::abs(area - ref) / ref;

  bool relations = true;
  std::size_t graphs = 0;
  auto agree = [&](const geokg::EntitySet& s, const geokg::RegionThresholds& t) {
    const auto edges = geokg::derive_relations(s, t);
    relations = relations && std::set<geokg::RelationEdge>(edges.begin(), edges.end()) == oracle::brute_force_relations(s, t) &&
                edges == geokg::derive_relations_serial(s, t);
    ++graphs;
  };
  agree(testing::mini_city_entities(), {});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) agree(testing::random_city(seed, 50, 25, 20), {400, 800, 60});

  return {rel <= 1e-6 && area_rel <= 0.005 && relations,
          fmt("antipodal relative error %.1e; 0.01 deg square area off by %.3f%%", rel, 100 * area_rel) + "; " +
              std::to_string(graphs) + " graphs " + (relations ? "match" : "DO NOT match") +
              " the brute-force relation oracle"};
}

// ------------------------------------------------------------------ 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "geohalu");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::vector<std::string> pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto f = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> steps{
      {"--seed", "10", "build-kg", "--input", testing::mini_city_data_path(), "--city", "Lakeview", "--out", f("graph.json"),
       "--rejections", f("rejected.jsonl")},
      {"--seed", "10", "gen-bench", "--graph", f("graph.json"), "--out", f("bench.jsonl"), "--per-task", "10"},
      {"--seed", "10", "gen-alignset", "--graph", f("graph.json"), "--bench", f("bench.jsonl"), "--out", f("align.jsonl"),
       "--entity", "6", "--relation", "40", "--attribute", "10"},
      {"--seed", "10", "eval", "--endpoint", "mock:random", "--bench", f("bench.jsonl"), "--out", f("run.jsonl"),
       "--reproducible", "--concurrency", "4"},
      {"--seed", "10", "score", "--bench", f("bench.jsonl"), "--run", f("run.jsonl"), "--format", "json", "--out",
       f("report.json"), "--distribution", "--random-baseline", "20"},
      {"--seed", "10", "score", "--bench", f("bench.jsonl"), "--run", f("run.jsonl"), "--format", "markdown", "--out",
       f("report.md")}};
  std::vector<std::string> artifacts;
  for (const auto& s : steps)
    if (cli(s) != 0) return {};
  for (const char* name : {"graph.json", "rejected.jsonl", "bench.jsonl", "align.jsonl", "run.jsonl", "report.json", "report.md"})
    artifacts.push_back(slurp(dir / name));
  return artifacts;
}

Outcome end_to_end() {
  const auto base = fs::temp_directory_path() / ("geohalu-acceptance-" + std::to_string(::getpid()));
  const auto a = pipeline(base / "first");
  const auto b = pipeline(base / "second");
  fs::remove_all(base);
  if (a.empty() || b.empty()) return {false, "a pipeline stage failed"};
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += a[i] != b[i];
  return {differing == 0, std::to_string(a.size()) + " artifacts, " + std::to_string(differing) + " differ between runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"KTO reduction", kto_reduction},
      {"Gradient fidelity", gradient_fidelity},
      {"Closed-form anchors", closed_forms},
      {"Training direction", training_direction},
      {"Schedule comparison", schedule_comparison},
      {"Benchmark soundness", benchmark_soundness},
      {"Harness calibration", harness_calibration},
      {"Scoring contract", scoring_contract},
      {"Geometry oracles", geometry_oracles},
      {"End-to-end determinism", end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu. %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
