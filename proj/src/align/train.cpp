#include "geohalu/align/train.hpp"

#include <cctype>
#include <cstdio>
#include <map>

#include "geohalu/error.hpp"
#include "geohalu/random.hpp"

namespace geohalu::align {

std::string_view to_string(Schedule s) { return s == Schedule::Mixed ? "mixed" : "sequential"; }

std::optional<Schedule> parse_schedule(std::string_view s) {
  if (s == "mixed") return Schedule::Mixed;
  if (s == "sequential") return Schedule::Sequential;
  return std::nullopt;
}

namespace {

struct Phase {
  std::optional<Category> tag;
  SequenceBatch batch;
  BetaDiagnostics diagnostics;
  std::size_t steps = 0;
};

std::vector<Phase> plan(const SequenceBatch& data, const TrainConfig& cfg, const BetaDiagnostics* diag) {
  std::vector<Phase> phases;
  if (cfg.schedule == Schedule::Mixed) {
    Phase ph;
    ph.batch = data;
    if (diag) ph.diagnostics = *diag;
    ph.steps = cfg.steps;
    phases.push_back(std::move(ph));
    return phases;
  }
  for (auto tag : cfg.order) {
    Phase ph;
    ph.tag = tag;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.samples[i].tag != tag) continue;
      ph.batch.samples.push_back(data.samples[i]);
      if (diag) {
        if (!diag->terms.empty()) ph.diagnostics.terms.push_back(diag->terms.at(i));
        if (!diag->features.empty()) ph.diagnostics.features.push_back(diag->features.at(i));
      }
    }
    if (ph.batch.size() == 0) continue;
    assign_cyclic_partners(ph.batch);
    phases.push_back(std::move(ph));
  }
  if (phases.empty()) throw ValidationError("no samples carry any tag of the sequential order");
  for (std::size_t i = 0; i < phases.size(); ++i)
    phases[i].steps = cfg.steps / phases.size() + (i < cfg.steps % phases.size() ? 1 : 0);
  return phases;
}

}  // namespace

TrainResult toy_train(ToyPolicy policy, const SequenceBatch& data, const std::vector<FactPair>& eval_pairs,
                      const TrainConfig& config, const BetaDiagnostics* diagnostics) {
  if (config.steps == 0) throw ValidationError("steps must be > 0");
  if (!(config.lr > 0.0)) throw ValidationError("learning rate must be > 0");
  if (config.eval_interval == 0) throw ValidationError("eval_interval must be > 0");
  validate(config.loss);
  validate(data, policy);

  TrainResult res{std::move(policy), {}};
  auto record = [&](std::size_t step, double loss, const std::optional<Category>& phase) {
    res.history.push_back({step, loss, fact_distance(res.policy, eval_pairs), phase});
  };

  std::size_t step = 0;
  for (auto& ph : plan(data, config, diagnostics)) {
    LossOptions opts;
    opts.diagnostics = diagnostics ? &ph.diagnostics : nullptr;
    if (ph.batch.size() < 2) opts.z0_override = 0.0;
    for (std::size_t k = 0; k < ph.steps; ++k, ++step) {
      const LossOutput out = dynamic_kto_loss(res.policy, ph.batch, config.loss, opts);
      if (step % config.eval_interval == 0) record(step, out.loss, ph.tag);
      auto& theta = res.policy.theta();
      for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= config.lr * out.gradient[i];
    }
    if (ph.steps > 0 && step == config.steps) {
      LossOptions last = opts;
      last.with_gradient = false;
      record(step, dynamic_kto_loss(res.policy, ph.batch, config.loss, last).loss, ph.tag);
    }
  }
  return res;
}

BetaDiagnostics fact_distance_diagnostics(const ToyPolicy& p, const SequenceBatch& data,
                                          const std::vector<FactPair>& pairs) {
  if (pairs.size() != data.size()) throw ValidationError("need one fact pair per sample");
  BetaDiagnostics d;
  d.terms = fact_distance(p, pairs).terms;
  return d;
}

ToyData from_alignset(const std::vector<alignset::TrainingSample>& samples) {
  std::vector<std::string> texts;
  for (const auto& s : samples) {
    if (s.counterpart.empty())
      throw ValidationError("sample " + s.sample_id + " has no counterpart completion");
    texts.push_back(s.prompt);
    texts.push_back(s.completion);
    texts.push_back(s.counterpart);
  }
  ToyData d;
  d.tokenizer = Tokenizer::build(texts);
  for (const auto& s : samples) {
    Sample smp;
    smp.seq = {d.tokenizer.encode(s.prompt), d.tokenizer.encode(s.completion)};
    smp.desirable = s.label == alignset::Label::Desirable;
    smp.tag = s.task_tag;
    d.train.samples.push_back(std::move(smp));
    d.train_pairs.push_back({d.tokenizer.encode(s.prompt), d.tokenizer.encode(s.factual()),
                             d.tokenizer.encode(s.hallucinated()), s.task_tag});
  }
  assign_cyclic_partners(d.train);
  return d;
}

SyntheticDataset make_synthetic_dataset(const SyntheticConfig& cfg) {
  if (cfg.facts_per_category == 0) throw ValidationError("synthetic dataset needs facts");
  if (cfg.answer_words < 3) throw ValidationError("synthetic dataset needs at least three answer words");
  Rng rng(cfg.seed);

  struct SynFact {
    Category tag;
    std::string prompt;
    std::string truth, wrong, heldout_wrong;
  };
  std::vector<SynFact> facts;
  auto answer = [](std::size_t k) { return "a" + std::to_string(k); };
  for (auto cat : benchgen::kAllCategories) {
    const std::string tag_word = "[" + std::string(benchgen::to_string(cat)) + "]";
    const char prefix = static_cast<char>(std::tolower(benchgen::to_string(cat)[0]));
    for (std::size_t i = 0; i < cfg.facts_per_category; ++i) {
      SynFact f;
      f.tag = cat;
      f.prompt = tag_word + " " + prefix + std::to_string(i);
      const std::size_t t = rng.index(cfg.answer_words);
      std::size_t w = rng.index(cfg.answer_words - 1);
      if (w >= t) ++w;
      std::size_t h;
      do h = rng.index(cfg.answer_words);
      while (h == t || h == w);
      f.truth = answer(t);
      f.wrong = answer(w);
      f.heldout_wrong = answer(h);
      facts.push_back(std::move(f));
    }
  }

  std::vector<std::string> texts;
  for (std::size_t k = 0; k < cfg.answer_words; ++k) texts.push_back(answer(k));
  for (const auto& f : facts) texts.push_back(f.prompt);

  SyntheticDataset out{{}, ToyPolicy(1)};
  ToyData& d = out.data;
  d.tokenizer = Tokenizer::build(texts);
  for (const auto& f : facts) {
    const auto prompt = d.tokenizer.encode(f.prompt);
    const auto truth = d.tokenizer.encode(f.truth);
    const auto wrong = d.tokenizer.encode(f.wrong);
    d.train.samples.push_back({{prompt, truth}, true, f.tag, 0});
    d.train.samples.push_back({{prompt, wrong}, false, f.tag, 0});
    d.train_pairs.push_back({prompt, truth, wrong, f.tag});
    d.train_pairs.push_back({prompt, truth, wrong, f.tag});
    d.heldout.push_back({prompt, truth, d.tokenizer.encode(f.heldout_wrong), f.tag});
  }
  assign_cyclic_partners(d.train);

  ToyPolicy p = ToyPolicy::random(d.tokenizer.size(), 2, derive_seed(cfg.seed, "init"), cfg.init_scale);
  const LogitTable t = p.theta_table();
  for (const auto& pair : d.heldout) {
    const std::size_t ctx = t.context_at(pair.prompt, pair.prompt.size());
    p.theta()[ctx * t.vocab + static_cast<std::size_t>(pair.factual[0])] +=
        cfg.initial_bias[static_cast<std::size_t>(pair.tag)];
  }
  p.freeze_reference();
  out.initial = std::move(p);
  return out;
}

std::vector<ScheduleRun> compare_schedules(const ToyPolicy& initial, const ToyData& data, TrainConfig config,
                                           const BetaDiagnostics* diagnostics) {
  std::vector<ScheduleRun> runs;
  for (auto s : {Schedule::Mixed, Schedule::Sequential}) {
    config.schedule = s;
    ScheduleRun run{s, toy_train(initial, data.train, data.train_pairs, config, diagnostics), {}};
    run.final_report = fact_distance(run.result.policy, data.train_pairs);
    runs.push_back(std::move(run));
  }
  return runs;
}

std::string schedule_report_csv(const std::vector<ScheduleRun>& runs, const std::vector<Category>& order) {
  std::string seq = "Sequential(";
  for (std::size_t i = 0; i < order.size(); ++i)
    seq += (i ? ">" : "") + std::string(1, benchgen::to_string(order[i])[0]);
  seq += ")";
  std::vector<std::pair<std::string, FactDistanceReport>> cols;
  for (const auto& r : runs) cols.emplace_back(r.schedule == Schedule::Mixed ? "Mixed" : seq, r.final_report);
  return fact_distance_csv(cols);
}

std::string history_csv(const std::vector<HistoryPoint>& history) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::string out = "step,loss,phase,Entity,Relation,Attribute,Macro,Std,SampleStd\n";
  for (const auto& h : history) {
    out += std::to_string(h.step) + "," + num(h.loss) + "," +
           (h.phase ? std::string(benchgen::to_string(*h.phase)) : std::string("all"));
    for (auto cat : benchgen::kAllCategories) {
      const auto m = h.fact_distance.mean(cat);
      out += "," + (m ? num(*m) : std::string());
    }
    out += "," + num(h.fact_distance.macro) + "," + num(h.fact_distance.std_across_categories) + "," +
           num(h.fact_distance.std_across_samples) + "\n";
  }
  return out;
}

}  // namespace geohalu::align
