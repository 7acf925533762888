#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/align/losses.hpp"
#include "geohalu/align/tokenizer.hpp"
#include "geohalu/alignset/dataset.hpp"

namespace geohalu::align {

enum class Schedule { Mixed, Sequential };

std::string_view to_string(Schedule s);
std::optional<Schedule> parse_schedule(std::string_view s);

struct TrainConfig {
  LossConfig loss;
  std::size_t steps = 300;
  // The loss is a batch mean, so per-row gradients scale like 1/N; this
  // default suits the few-hundred-sample toy datasets.
  double lr = 200.0;
  Schedule schedule = Schedule::Mixed;
  // Sequential: steps are split evenly over these tags in order (remainder
  // to the first ones). Tags without samples are skipped.
  std::vector<Category> order{Category::Entity, Category::Relation, Category::Attribute};
  std::size_t eval_interval = 20;
};

struct HistoryPoint {
  std::size_t step = 0;  // parameter updates applied so far
  double loss = 0.0;     // training loss of the batch trained at this step
  FactDistanceReport fact_distance;
  std::optional<Category> phase;  // Sequential only
};

struct TrainResult {
  ToyPolicy policy;
  std::vector<HistoryPoint> history;
};

// Full-batch gradient descent on dynamic_kto_loss. Mixed trains on every
// sample at each step; Sequential trains tag by tag. z0 is re-estimated per
// step from the batch being trained. History is evaluated on `eval_pairs`
// at step 0, every eval_interval steps, and after the last step.
// `diagnostics` (aligned with `data`) is needed by SampleLevel and
// ClusterLevel beta. Throws ValidationError for steps == 0 or lr <= 0.
TrainResult toy_train(ToyPolicy policy, const SequenceBatch& data, const std::vector<FactPair>& eval_pairs,
                      const TrainConfig& config, const BetaDiagnostics* diagnostics = nullptr);

// Per-sample fact-distance terms for beta policies: the term of the pair
// with the same prompt as each sample, evaluated under `p`.
BetaDiagnostics fact_distance_diagnostics(const ToyPolicy& p, const SequenceBatch& data,
                                          const std::vector<FactPair>& pairs);

// Data for the toy policy: every sample tokenized with one tokenizer built
// over all text; fact pairs are (prompt, factual, hallucinated) per sample.
struct ToyData {
  Tokenizer tokenizer;
  SequenceBatch train;
  std::vector<FactPair> train_pairs;  // aligned with train.samples
  std::vector<FactPair> heldout;      // pairs not trained on (may be empty)
};

ToyData from_alignset(const std::vector<alignset::TrainingSample>& samples);

struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::size_t facts_per_category = 100;  // each fact gives one desirable and one undesirable sample
  std::size_t answer_words = 40;
  // Added to the initial logit of every true answer; lower is harder.
  std::array<double, 3> initial_bias{-0.6, -0.3, 0.0};
  double init_scale = 0.5;
};

// A separable dataset: subject words per category, each with one true
// single-word answer. Training has a desirable sample (true answer) and an
// undesirable one (a wrong answer) per fact; held-out pairs contrast the
// true answer with a wrong answer never used in training.
struct SyntheticDataset {
  ToyData data;
  ToyPolicy initial;  // theta = reference
};

SyntheticDataset make_synthetic_dataset(const SyntheticConfig& cfg);

struct ScheduleRun {
  Schedule schedule;
  TrainResult result;
  FactDistanceReport final_report;
};

// Trains a copy of `initial` with each schedule (same config otherwise).
std::vector<ScheduleRun> compare_schedules(const ToyPolicy& initial, const ToyData& data, TrainConfig config,
                                           const BetaDiagnostics* diagnostics = nullptr);

// FactDistance CSV with one column per schedule ("Mixed", "Sequential(E>R>A)").
std::string schedule_report_csv(const std::vector<ScheduleRun>& runs, const std::vector<Category>& order);

// step,loss,phase,Entity,Relation,Attribute,Macro,Std,SampleStd
std::string history_csv(const std::vector<HistoryPoint>& history);

}  // namespace geohalu::align
