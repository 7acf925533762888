#include "geohalu/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "geohalu/align/gradcheck.hpp"
#include "geohalu/align/random_problems.hpp"
#include "geohalu/align/train.hpp"
#include "geohalu/alignset/dataset.hpp"
#include "geohalu/benchgen/generate.hpp"
#include "geohalu/eval/harness.hpp"
#include "geohalu/geokg/graph_io.hpp"
#include "geohalu/geokg/ingest.hpp"
#include "geohalu/geokg/relations.hpp"
#include "geohalu/scoring/scoring.hpp"
#include "geohalu/text.hpp"

namespace geohalu::cli {

namespace {

namespace fs = std::filesystem;
using benchgen::Category;

// Usage problems found after parsing (e.g. mutually required flags).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 0;

  // build-kg
  std::string input, city, graph_out, rejections_out;
  std::vector<double> bbox;
  geokg::RegionThresholds thresholds;

  // gen-bench
  std::string graph, bench_out;
  bool abstain = false;
  std::optional<std::size_t> per_task, entity_per_task, relation_per_task, attribute_per_task;
  double theta_attr = 0.5;
  std::string fabricator = "template";

  // gen-alignset
  std::string bench, alignset_out;
  std::optional<std::size_t> align_entity, align_relation, align_attribute;
  bool no_paraphrase = false;
  double negative_ratio = 0.5;

  // eval (endpoint/model also used by the LLM fabricator)
  std::string endpoint, model, run_out, system_prompt;
  int concurrency = 4;
  double timeout_s = 60.0;
  int retries = 3;
  bool resume = false;
  bool reproducible = false;

  // score
  std::vector<std::string> runs, names;
  std::string format = "csv";
  std::string report_out;
  bool distribution = false;
  std::size_t random_trials = 0;

  // rank
  std::string report, against;

  // fact-distance / toy-train
  std::string alignset, policy_in, policy_out, history_out;
  bool synthetic = false;
  std::size_t steps = 300;
  double lr = 200.0;
  std::string schedule = "mixed";
  std::string order = "Entity,Relation,Attribute";
  std::string beta_policy = "category";
  double beta = 0.1;
  double lambda_d = 1.0, lambda_u = 1.0;
  std::size_t eval_interval = 20;

  // loss-check
  std::string loss = "dynamic-kto";
  double eps = 1e-5;
  std::size_t trials = 5;
  std::size_t vocab = 5;
  std::size_t batch = 8;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::string> env_token() {
  if (const char* t = std::getenv("GEOHALU_API_TOKEN"); t && *t) return std::string(t);
  return std::nullopt;
}

std::unique_ptr<eval::HttpChatClient> http_client(const Options& o) {
  eval::ModelEndpoint ep;
  ep.base_url = o.endpoint;
  ep.model_name = o.model;
  ep.auth_token = env_token();
  ep.max_concurrency = o.concurrency;
  ep.timeout_s = o.timeout_s;
  ep.max_retries = o.retries;
  return std::make_unique<eval::HttpChatClient>(ep);
}

// "mock:oracle", "mock:random[:SEED]", "mock:abstain", "mock:violator", or
// an HTTP base URL.
std::unique_ptr<eval::ChatClient> make_client(const Options& o, const std::vector<benchgen::BenchmarkItem>& items) {
  const std::string& e = o.endpoint;
  if (e.rfind("mock:", 0) != 0) return http_client(o);
  const std::string kind = e.substr(5);
  if (kind == "oracle") return std::make_unique<eval::MockEndpoint>(eval::MockKind::Oracle, items);
  if (kind == "abstain") return std::make_unique<eval::MockEndpoint>(eval::MockKind::AlwaysAbstain, items);
  if (kind == "violator") return std::make_unique<eval::MockEndpoint>(eval::MockKind::Violator, items);
  if (kind == "random" || kind.rfind("random:", 0) == 0) {
    std::uint64_t seed = derive_seed(o.seed, "mock");
    if (kind.size() > 7) {
      try {
        std::size_t used = 0;
        seed = std::stoull(kind.substr(7), &used);
        if (used != kind.size() - 7) throw std::invalid_argument(kind);
      } catch (const std::exception&) {
        throw UsageError("bad mock seed in endpoint '" + e + "'");
      }
    }
    return std::make_unique<eval::MockEndpoint>(eval::MockKind::UniformRandom, items, seed);
  }
  throw UsageError("unknown mock endpoint '" + e + "' (oracle, random[:SEED], abstain, violator)");
}

std::vector<Category> parse_order(const std::string& s) {
  std::vector<Category> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    auto c = benchgen::parse_category(collapse_whitespace(cur));
    if (!c) throw UsageError("unknown category '" + cur + "' in --order");
    out.push_back(*c);
  }
  if (out.empty()) throw UsageError("--order is empty");
  return out;
}

align::BetaPolicy make_beta_policy(const Options& o) {
  auto kind = align::parse_beta_kind(o.beta_policy);
  if (!kind) throw UsageError("unknown --beta-policy '" + o.beta_policy + "' (constant, category, sample, cluster)");
  switch (*kind) {
    case align::BetaPolicy::Kind::Constant: return align::BetaPolicy::constant(o.beta);
    case align::BetaPolicy::Kind::Category: return align::BetaPolicy::category();
    case align::BetaPolicy::Kind::SampleLevel: return align::BetaPolicy::sample_level();
    case align::BetaPolicy::Kind::ClusterLevel:
      return align::BetaPolicy::cluster_level(3, derive_seed(o.seed, "kmeans"));
  }
  return {};
}

// ---------------------------------------------------------------- build-kg

int cmd_build_kg(const Options& o, std::ostream& out) {
  geokg::BoundingBox box;
  if (!o.bbox.empty()) {
    if (o.bbox.size() != 4) throw UsageError("--bbox takes min_lat min_lon max_lat max_lon");
    box = {o.bbox[0], o.bbox[1], o.bbox[2], o.bbox[3]};
  }
  geokg::validate(o.thresholds);
  auto res = geokg::ingest_entities(fs::path(o.input), o.city, box);
  auto edges = geokg::derive_relations(res.entities, o.thresholds);
  auto g = geokg::build_graph(o.city, std::move(res.entities), std::move(edges), o.thresholds);
  geokg::save_graph(g, o.graph_out);
  if (!o.rejections_out.empty()) write_file(o.rejections_out, geokg::rejection_report_jsonl(res.rejections));
  out << "graph " << o.graph_out << ": " << g.pois().size() << " POIs, " << g.aois().size() << " AOIs, "
      << g.roads().size() << " roads, " << g.edges().size() << " edges; " << res.rejections.size()
      << " records rejected\n";
  return kExitOk;
}

// --------------------------------------------------------------- gen-bench

int cmd_gen_bench(const Options& o, std::ostream& out) {
  const auto g = geokg::load_graph(o.graph);
  benchgen::GenerationConfig cfg;
  cfg.seed = o.seed;
  cfg.theta_attr = o.theta_attr;
  if (o.per_task) cfg.set_all(*o.per_task);
  for (auto t : benchgen::kAllTasks) {
    const auto& n = benchgen::category_of(t) == Category::Entity     ? o.entity_per_task
                    : benchgen::category_of(t) == Category::Relation ? o.relation_per_task
                                                                     : o.attribute_per_task;
    if (n) cfg.set_count(t, *n);
  }
  std::unique_ptr<eval::HttpChatClient> client;
  if (o.fabricator == "llm") {
    if (o.endpoint.empty() || o.model.empty()) throw UsageError("--fabricator llm needs --endpoint and --model");
    client = http_client(o);
    cfg.mode = benchgen::FabricatorMode::LlmAssisted;
    cfg.client = client.get();
  } else if (o.fabricator != "template") {
    throw UsageError("unknown --fabricator '" + o.fabricator + "' (template, llm)");
  }
  auto items = benchgen::generate_benchmark(g, cfg);
  const auto variant = o.abstain ? benchgen::Variant::Abstain : benchgen::Variant::Standard;
  if (o.abstain)
    for (auto& item : items) item = benchgen::make_abstain_variant(item);
  benchgen::save_benchmark(items, benchgen::make_header(g, cfg, variant, items.size()), o.bench_out);
  out << "benchmark " << o.bench_out << ": " << items.size() << " items (" << benchgen::to_string(variant)
      << ")\n";
  return kExitOk;
}

// ------------------------------------------------------------ gen-alignset

int cmd_gen_alignset(const Options& o, std::ostream& out) {
  const auto g = geokg::load_graph(o.graph);
  const auto bench = benchgen::load_benchmark(o.bench);
  alignset::AlignsetConfig cfg;
  cfg.seed = o.seed;
  if (o.align_entity) cfg.entity_count = *o.align_entity;
  if (o.align_relation) cfg.relation_count = *o.align_relation;
  if (o.align_attribute) cfg.attribute_count = *o.align_attribute;
  cfg.paraphrase = !o.no_paraphrase;
  cfg.negative_ratio = o.negative_ratio;
  cfg.theta_attr = o.theta_attr;
  const auto samples = alignset::generate_alignment_dataset(g, bench.items, cfg);
  const auto leak = alignset::leakage_check(samples, bench.items);
  if (!leak.clean)
    throw ValidationError("alignment dataset overlaps the benchmark in " + std::to_string(leak.collisions.size()) +
                          " facts");
  alignset::save_alignset(samples, {g.city(), cfg.seed, samples.size()}, o.alignset_out);
  out << "alignset " << o.alignset_out << ": " << samples.size() << " samples, leakage check clean\n";
  return kExitOk;
}

// -------------------------------------------------------------------- eval

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto bench = benchgen::load_benchmark(o.bench);
  auto client = make_client(o, bench.items);
  eval::RunOptions ro;
  ro.max_concurrency = o.concurrency;
  ro.resume = o.resume;
  ro.reproducible = o.reproducible;
  ro.model = o.model;
  if (!o.system_prompt.empty()) ro.system_prompt = o.system_prompt;
  const auto res = eval::run_eval(*client, bench.items, o.run_out, ro);
  out << "run " << o.run_out << ": " << res.records.size() << "/" << bench.items.size() << " items recorded ("
      << res.resumed << " resumed)\n";
  if (!res.failures.empty()) {
    for (const auto& f : res.failures) err << "item " << f.item_id << " failed: " << f.error << "\n";
    err << res.failures.size() << " items failed; rerun with --resume to retry them\n";
    return kExitDomainError;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- score

int cmd_score(const Options& o, std::ostream& out) {
  auto fmt = scoring::parse_report_format(o.format);
  if (!fmt) throw UsageError("unknown --format '" + o.format + "' (csv, markdown, json)");
  if (!o.names.empty() && o.names.size() != o.runs.size()) throw UsageError("give one --name per --run");
  const auto bench = benchgen::load_benchmark(o.bench);
  const std::string hash = eval::benchmark_hash(bench.items);
  std::vector<scoring::ReportRow> rows;
  for (std::size_t i = 0; i < o.runs.size(); ++i) {
    const auto run = eval::load_run(o.runs[i]);
    if (run.manifest.benchmark_sha256 != hash)
      throw ValidationError("run " + o.runs[i] + " was made against a different benchmark");
    scoring::ReportRow row;
    row.model = !o.names.empty() ? o.names[i] : !run.manifest.model.empty() ? run.manifest.model : run.manifest.endpoint;
    row.scores = scoring::score_run(bench.items, run.records);
    if (o.distribution) row.distribution = scoring::type_distribution(run.records);
    rows.push_back(std::move(row));
  }
  if (o.random_trials > 0)
    rows.push_back({"Random", scoring::random_baseline(bench.items, derive_seed(o.seed, "random-baseline"), o.random_trials),
                    std::nullopt});
  const std::string doc = scoring::emit_report(rows, *fmt);
  if (o.report_out.empty())
    out << doc;
  else
    write_file(o.report_out, doc);
  return kExitOk;
}

// -------------------------------------------------------------------- rank

scoring::Ranking ranking_from_report(const std::string& path) {
  std::vector<std::pair<std::string, scoring::CategoryScores>> named;
  for (const auto& r : scoring::parse_json_report(read_file(path))) named.emplace_back(r.model, r.scores);
  return scoring::rank_models(named);
}

int cmd_rank(const Options& o, std::ostream& out) {
  const auto a = ranking_from_report(o.report);
  std::string doc;
  char buf[160];
  if (o.against.empty()) {
    doc = "Model,Overall,Ranking,Percentile\n";
    for (const auto& e : a) {
      std::snprintf(buf, sizeof buf, ",%.4f,%zu,%.4f\n", e.overall, e.rank, e.percentile);
      doc += e.model + buf;
    }
  } else {
    const auto b = ranking_from_report(o.against);
    doc = "Model,RankingA,RankingB,PercentileA,PercentileB,Shift\n";
    for (const auto& s : scoring::percentile_shift(a, b)) {
      std::snprintf(buf, sizeof buf, ",%zu,%zu,%.4f,%.4f,%+.4f\n", s.rank_a, s.rank_b, s.percentile_a,
                    s.percentile_b, s.delta);
      doc += s.model + buf;
    }
  }
  if (o.report_out.empty())
    out << doc;
  else
    write_file(o.report_out, doc);
  return kExitOk;
}

// ------------------------------------------------- fact-distance / toy-train

struct LoadedToy {
  align::ToyData data;
  align::ToyPolicy initial{1};
};

LoadedToy load_toy(const Options& o) {
  if (o.synthetic == !o.alignset.empty()) throw UsageError("give exactly one of --alignset and --synthetic");
  LoadedToy t;
  if (o.synthetic) {
    align::SyntheticConfig sc;
    sc.seed = o.seed;
    auto syn = align::make_synthetic_dataset(sc);
    t.data = std::move(syn.data);
    t.initial = std::move(syn.initial);
  } else {
    t.data = align::from_alignset(alignset::load_alignset(o.alignset).samples);
    t.initial = align::ToyPolicy::random(t.data.tokenizer.size(), 2, derive_seed(o.seed, "init"), 0.5);
  }
  return t;
}

align::ToyPolicy policy_for(const Options& o, const LoadedToy& t) {
  if (o.policy_in.empty()) return t.initial;
  auto pf = align::load_policy(o.policy_in);
  if (pf.tokens != t.data.tokenizer.tokens())
    throw ValidationError("policy " + o.policy_in + " was trained on a different vocabulary");
  return std::move(pf.policy);
}

void emit(const Options& o, std::ostream& out, const std::string& doc) {
  if (o.report_out.empty())
    out << doc;
  else
    write_file(o.report_out, doc);
}

int cmd_fact_distance(const Options& o, std::ostream& out) {
  const auto t = load_toy(o);
  const auto p = policy_for(o, t);
  const std::string name = o.policy_in.empty() ? "Untrained" : fs::path(o.policy_in).stem().string();
  std::vector<std::pair<std::string, align::FactDistanceReport>> cols{{name, align::fact_distance(p, t.data.train_pairs)}};
  emit(o, out, align::fact_distance_csv(cols));
  return kExitOk;
}

int cmd_toy_train(const Options& o, std::ostream& out) {
  const auto t = load_toy(o);
  align::TrainConfig cfg;
  cfg.steps = o.steps;
  cfg.lr = o.lr;
  cfg.order = parse_order(o.order);
  cfg.eval_interval = o.eval_interval;
  cfg.loss.lambda_d = o.lambda_d;
  cfg.loss.lambda_u = o.lambda_u;
  cfg.loss.beta_policy = make_beta_policy(o);

  std::optional<align::BetaDiagnostics> diag;
  if (cfg.loss.beta_policy.kind == align::BetaPolicy::Kind::SampleLevel ||
      cfg.loss.beta_policy.kind == align::BetaPolicy::Kind::ClusterLevel)
    diag = align::fact_distance_diagnostics(t.initial, t.data.train, t.data.train_pairs);
  const align::BetaDiagnostics* dp = diag ? &*diag : nullptr;

  if (o.schedule == "compare") {
    if (!o.policy_out.empty() || !o.history_out.empty())
      throw UsageError("--save-policy and --history need a single --schedule (mixed or sequential)");
    const auto runs = align::compare_schedules(t.initial, t.data, cfg, dp);
    emit(o, out, align::schedule_report_csv(runs, cfg.order));
    return kExitOk;
  }
  auto sched = align::parse_schedule(o.schedule);
  if (!sched) throw UsageError("unknown --schedule '" + o.schedule + "' (mixed, sequential, compare)");
  cfg.schedule = *sched;
  const auto before = align::fact_distance(t.initial, t.data.train_pairs);
  auto res = align::toy_train(t.initial, t.data.train, t.data.train_pairs, cfg, dp);
  const auto after = align::fact_distance(res.policy, t.data.train_pairs);
  if (!o.policy_out.empty()) align::save_policy(res.policy, t.data.tokenizer.tokens(), o.policy_out);
  if (!o.history_out.empty()) write_file(o.history_out, align::history_csv(res.history));
  if (!t.data.heldout.empty()) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "held-out factual preference: %.4f -> %.4f\n",
                  align::preference_accuracy(t.initial, t.data.heldout),
                  align::preference_accuracy(res.policy, t.data.heldout));
    out << buf;
  }
  emit(o, out, align::fact_distance_csv({{"Untrained", before}, {"Trained", after}}));
  return kExitOk;
}

// -------------------------------------------------------------- loss-check

int cmd_loss_check(const Options& o, std::ostream& out) {
  align::RandomProblemConfig rc;
  rc.vocab = o.vocab;
  rc.batch = o.batch;
  if (rc.vocab < 2 || rc.batch < 3) throw UsageError("loss-check needs --vocab >= 2 and --batch >= 3");
  Rng rng(derive_seed(o.seed, "loss-check"));
  align::GradCheckResult worst;
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    const auto p = align::random_policy(rc, rng);
    align::Objective f;
    if (o.loss == "kto" || o.loss == "dynamic-kto") {
      const auto batch = align::random_batch(rc, rng);
      align::LossConfig lc;
      lc.beta_policy = o.loss == "kto" ? align::BetaPolicy::constant(o.beta) : make_beta_policy(o);
      auto diag = std::make_shared<align::BetaDiagnostics>(align::random_diagnostics(batch.size(), rng));
      auto inner = align::kto_objective(p, batch, lc, diag.get());
      f = [diag, inner](const std::vector<double>& x, std::vector<double>* g) { return inner(x, g); };
    } else if (o.loss == "dpo") {
      f = align::dpo_objective(p, align::random_preference_pairs(rc, rng), o.beta);
    } else if (o.loss == "fact-distance") {
      f = align::fact_distance_objective_fn(p, align::random_fact_pairs(rc, rng));
    } else {
      throw UsageError("unknown --loss '" + o.loss + "' (kto, dynamic-kto, dpo, fact-distance)");
    }
    const auto r = align::grad_check(f, p.theta(), o.eps);
    if (trial == 0 || r.max_rel_error > worst.max_rel_error) worst = r;
  }
  const bool pass = worst.max_rel_error < 1e-4;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "loss=%s trials=%zu eps=%g max relative error: %.3e\n"
                "worst component: analytic %.6e numeric %.6e\n%s (threshold 1e-4)\n",
                o.loss.c_str(), o.trials, o.eps, worst.max_rel_error, worst.analytic, worst.numeric,
                pass ? "PASS" : "FAIL");
  out << buf;
  return pass ? kExitOk : kExitDomainError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Geospatial hallucination benchmark and DynamicKTO toolkit", "geohalu"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "TOML/INI config file; [subcommand] sections set that subcommand's flags");
  app.add_option("--seed", o.seed, "Global seed; every random choice is derived from it")->capture_default_str();

  auto* build = app.add_subcommand("build-kg", "Ingest entity records and build the knowledge graph");
  build->add_option("--input", o.input, "Line-delimited entity records")->required();
  build->add_option("--city", o.city, "City name")->required();
  build->add_option("--out", o.graph_out, "Graph file to write")->required();
  build->add_option("--rejections", o.rejections_out, "Write the rejection report (jsonl) here");
  build->add_option("--bbox", o.bbox, "min_lat min_lon max_lat max_lon")->expected(4);
  build->add_option("--near-poi-m", o.thresholds.near_poi_m, "POI-Near-POI distance (m)")->capture_default_str();
  build->add_option("--near-aoi-m", o.thresholds.near_aoi_m, "AOI-Near-AOI centroid distance (m)")->capture_default_str();
  build->add_option("--connect-m", o.thresholds.connect_m, "AOI-ConnectTo-Road distance (m)")->capture_default_str();

  auto* gen = app.add_subcommand("gen-bench", "Generate the multiple-choice benchmark");
  gen->add_option("--graph", o.graph, "Graph file")->required();
  gen->add_option("--out", o.bench_out, "Benchmark file to write")->required();
  gen->add_flag("--abstain", o.abstain, "Write the abstain variant (adds \"Cannot Determine\")");
  gen->add_option("--per-task", o.per_task, "Items for every task");
  gen->add_option("--entity-per-task", o.entity_per_task, "Items per Entity task (default 200)");
  gen->add_option("--relation-per-task", o.relation_per_task, "Items per Relation task (default 250)");
  gen->add_option("--attribute-per-task", o.attribute_per_task, "Items per Attribute task (default 50)");
  gen->add_option("--theta-attr", o.theta_attr, "Minimum relative gap of numeric confusions")->capture_default_str();
  gen->add_option("--fabricator", o.fabricator, "template or llm")->capture_default_str();
  gen->add_option("--endpoint", o.endpoint, "Chat endpoint base URL for --fabricator llm");
  gen->add_option("--model", o.model, "Model name for --fabricator llm");

  auto* gal = app.add_subcommand("gen-alignset", "Generate the labelled fine-tuning dataset");
  gal->add_option("--graph", o.graph, "Graph file")->required();
  gal->add_option("--bench", o.bench, "Benchmark whose facts must not leak")->required();
  gal->add_option("--out", o.alignset_out, "Dataset file to write")->required();
  gal->add_option("--entity", o.align_entity, "Entity samples in total (default 1500)");
  gal->add_option("--relation", o.align_relation, "Relation samples in total (default 2000)");
  gal->add_option("--attribute", o.align_attribute, "Attribute samples in total (default 2000)");
  gal->add_flag("--no-paraphrase", o.no_paraphrase, "Use only the first narrative template");
  gal->add_option("--negative-ratio", o.negative_ratio, "Fraction of Undesirable samples")->capture_default_str();
  gal->add_option("--theta-attr", o.theta_attr, "Minimum relative gap of numeric confusions")->capture_default_str();

  auto* ev = app.add_subcommand("eval", "Run a benchmark against a chat endpoint");
  ev->add_option("--endpoint", o.endpoint, "Base URL, or mock:oracle|mock:random[:SEED]|mock:abstain|mock:violator")
      ->required();
  ev->add_option("--model", o.model, "Model name sent with each request");
  ev->add_option("--bench", o.bench, "Benchmark file")->required();
  ev->add_option("--out", o.run_out, "Run file (manifest + records)")->required();
  ev->add_option("--concurrency", o.concurrency, "Requests in flight")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--timeout", o.timeout_s, "Per-request timeout (s)")->capture_default_str();
  ev->add_option("--retries", o.retries, "Attempts per request")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--system-prompt", o.system_prompt, "Optional system message");
  ev->add_flag("--resume", o.resume, "Keep records already in --out and evaluate the rest");
  ev->add_flag("--reproducible", o.reproducible, "Omit timestamps and latencies so runs are byte-comparable");

  auto* sc = app.add_subcommand("score", "Score runs and emit a report");
  sc->add_option("--bench", o.bench, "Benchmark file")->required();
  sc->add_option("--run", o.runs, "Run file (repeatable)")->required();
  sc->add_option("--name", o.names, "Model name per --run (default: from the manifest)");
  sc->add_option("--format", o.format, "csv, markdown or json")->capture_default_str();
  sc->add_option("--out", o.report_out, "Report file (default: stdout)");
  sc->add_flag("--distribution", o.distribution, "Add hallucination-type distribution columns");
  sc->add_option("--random-baseline", o.random_trials, "Add a Random row averaged over this many trials");

  auto* rk = app.add_subcommand("rank", "Rank models from a json score report");
  rk->add_option("--report", o.report, "json report from score")->required();
  rk->add_option("--against", o.against, "Second json report; prints percentile shifts");
  rk->add_option("--out", o.report_out, "Output csv (default: stdout)");

  auto add_toy_inputs = [&](CLI::App* c) {
    c->add_option("--alignset", o.alignset, "Alignment dataset file");
    c->add_flag("--synthetic", o.synthetic, "Use the built-in synthetic separable dataset");
    c->add_option("--out", o.report_out, "FactDistance csv (default: stdout)");
  };
  auto* fd = app.add_subcommand("fact-distance", "FactDistance report of a toy policy");
  add_toy_inputs(fd);
  fd->add_option("--policy", o.policy_in, "Policy file (default: the untrained initial policy)");

  auto add_beta = [&](CLI::App* c) {
    c->add_option("--beta-policy", o.beta_policy, "constant, category, sample or cluster")->capture_default_str();
    c->add_option("--beta", o.beta, "beta for the constant policy")->capture_default_str();
  };
  auto* lc = app.add_subcommand("loss-check", "Finite-difference gradient check of a loss");
  lc->add_option("--loss", o.loss, "kto, dynamic-kto, dpo or fact-distance")->capture_default_str();
  add_beta(lc);
  lc->add_option("--eps", o.eps, "Central-difference step")->capture_default_str();
  lc->add_option("--trials", o.trials, "Random problems to check")->capture_default_str();
  lc->add_option("--vocab", o.vocab, "Vocabulary size")->capture_default_str();
  lc->add_option("--batch", o.batch, "Batch size")->capture_default_str();

  auto* tt = app.add_subcommand("toy-train", "Train a toy policy with DynamicKTO");
  add_toy_inputs(tt);
  add_beta(tt);
  tt->add_option("--steps", o.steps, "Gradient steps")->capture_default_str();
  tt->add_option("--lr", o.lr, "Learning rate")->capture_default_str();
  tt->add_option("--schedule", o.schedule, "mixed, sequential, or compare (runs both)")->capture_default_str();
  tt->add_option("--order", o.order, "Sequential category order")->capture_default_str();
  tt->add_option("--lambda-d", o.lambda_d, "lambda for desirable samples")->capture_default_str();
  tt->add_option("--lambda-u", o.lambda_u, "lambda for undesirable samples")->capture_default_str();
  tt->add_option("--eval-interval", o.eval_interval, "Steps between history points")->capture_default_str();
  tt->add_option("--save-policy", o.policy_out, "Write the trained policy here");
  tt->add_option("--history", o.history_out, "Write the training history csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build_kg(o, out);
    if (*gen) return cmd_gen_bench(o, out);
    if (*gal) return cmd_gen_alignset(o, out);
    if (*ev) return cmd_eval(o, out, err);
    if (*sc) return cmd_score(o, out);
    if (*rk) return cmd_rank(o, out);
    if (*fd) return cmd_fact_distance(o, out);
    if (*lc) return cmd_loss_check(o, out);
    if (*tt) return cmd_toy_train(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace geohalu::cli
