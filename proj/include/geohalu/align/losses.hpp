#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/align/policy.hpp"
#include "geohalu/benchgen/taxonomy.hpp"

namespace geohalu::align {

using benchgen::Category;

struct Sample {
  Sequence seq;
  bool desirable = true;
  Category tag = Category::Entity;
  std::size_t partner = 0;  // index of the sample whose completion forms the mismatched pair

  bool operator==(const Sample&) const = default;
};

struct SequenceBatch {
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  bool operator==(const SequenceBatch&) const = default;
};

// Throws ValidationError on an empty completion, an out-of-vocabulary token,
// or a partner that is the sample itself or out of range.
void validate(const SequenceBatch& b, const ToyPolicy& p);

// Sets partner(i) = (i + 1) mod n.
void assign_cyclic_partners(SequenceBatch& b);

struct BetaPolicy {
  enum class Kind { Constant, Category, SampleLevel, ClusterLevel };

  Kind kind = Kind::Constant;
  double beta = 0.1;  // Constant
  std::map<Category, double> by_category{{Category::Entity, 0.1}, {Category::Relation, 0.3},
                                         {Category::Attribute, 0.5}};
  // SampleLevel / ClusterLevel: beta = clamp(c / term, beta_min, beta_max)
  double c = 0.07;
  double beta_min = 0.05;
  double beta_max = 0.6;
  std::size_t k = 3;       // ClusterLevel
  std::uint64_t seed = 0;  // ClusterLevel

  static BetaPolicy constant(double beta);
  static BetaPolicy category(std::map<Category, double> by_category = {{Category::Entity, 0.1},
                                                                       {Category::Relation, 0.3},
                                                                       {Category::Attribute, 0.5}});
  static BetaPolicy sample_level(double c = 0.07, double beta_min = 0.05, double beta_max = 0.6);
  static BetaPolicy cluster_level(std::size_t k = 3, std::uint64_t seed = 0, double c = 0.07,
                                  double beta_min = 0.05, double beta_max = 0.6);
};

std::string_view to_string(BetaPolicy::Kind k);
std::optional<BetaPolicy::Kind> parse_beta_kind(std::string_view s);

void validate(const BetaPolicy& b);

// Precomputed per-sample fact-distance terms (aligned with the batch), and
// optionally richer per-sample feature vectors for clustering (default: the
// term itself as a 1-D feature).
struct BetaDiagnostics {
  std::vector<double> terms;
  std::vector<std::vector<double>> features;
};

// One beta per sample. Throws ValidationError for a Category policy that
// lacks a sample's tag, or a SampleLevel/ClusterLevel policy without
// diagnostics for every sample.
std::vector<double> resolve_betas(const BetaPolicy& policy, const SequenceBatch& batch,
                                  const BetaDiagnostics* diagnostics = nullptr);

struct LossConfig {
  double lambda_d = 1.0;
  double lambda_u = 1.0;
  BetaPolicy beta_policy = BetaPolicy::category();
  LogProbMode logprob_mode = LogProbMode::SumTokens;
};

void validate(const LossConfig& c);

struct SampleDiagnostics {
  double r = 0.0;
  double beta = 0.0;
  double v = 0.0;
};

struct LossOutput {
  double loss = 0.0;
  double z0 = 0.0;
  std::vector<SampleDiagnostics> samples;
  std::vector<double> gradient;  // d loss / d theta; empty when not requested
};

struct LossOptions {
  // Use this z0 instead of estimating it (gradient checks freeze z0 at the
  // base point since no gradient flows through it).
  std::optional<double> z0_override;
  bool with_gradient = true;
  const BetaDiagnostics* diagnostics = nullptr;
};

double sigmoid(double t);
// log(1 + e^x) without overflow.
double softplus(double x);

// log pi_theta(y|x) - log pi_ref(y|x).
double reward(const ToyPolicy& p, const Sequence& s, LogProbMode mode);

// max(0, mean_i reward(x_i, y_partner(i))). Throws ValidationError for
// batches with fewer than two samples.
double estimate_z0(const ToyPolicy& p, const SequenceBatch& b, LogProbMode mode);

// Desirable: lambda_d * sigmoid(beta (r - z0)); undesirable:
// lambda_u * sigmoid(beta (z0 - r)).
double kto_value(double r, double z0, double beta, bool desirable, double lambda_d, double lambda_u);

// mean_i (lambda_{y_i} - v_i) with beta_i from the config's BetaPolicy.
LossOutput dynamic_kto_loss(const ToyPolicy& p, const SequenceBatch& b, const LossConfig& cfg,
                            const LossOptions& opts = {});

struct PreferencePair {
  std::vector<int> prompt;
  std::vector<int> chosen;
  std::vector<int> rejected;
};

// -mean log sigmoid(beta (r_chosen - r_rejected)).
LossOutput dpo_loss(const ToyPolicy& p, const std::vector<PreferencePair>& pairs, double beta,
                    LogProbMode mode = LogProbMode::SumTokens, bool with_gradient = true);

struct FactPair {
  std::vector<int> prompt;
  std::vector<int> factual;
  std::vector<int> hallucinated;
  Category tag = Category::Entity;
};

struct FactDistanceReport {
  std::array<std::optional<double>, 3> category_mean;  // Category order; nullopt when no pairs
  std::array<std::size_t, 3> category_n{};
  double macro = 0.0;                  // mean over categories with pairs
  double std_across_categories = 0.0;  // population std of the category means
  double std_across_samples = 0.0;     // population std of all per-pair terms
  std::size_t n = 0;
  std::vector<double> terms;  // per pair, input order
  std::vector<Category> missing;

  std::optional<double> mean(Category c) const { return category_mean[static_cast<std::size_t>(c)]; }
};

// z = mean-logprob(factual) - mean-logprob(hallucinated) under theta;
// term = -log sigmoid(z).
FactDistanceReport fact_distance(const ToyPolicy& p, const std::vector<FactPair>& pairs);

// The mean term as a differentiable objective of theta.
LossOutput fact_distance_objective(const ToyPolicy& p, const std::vector<FactPair>& pairs,
                                   bool with_gradient = true);

// Fraction of pairs with z > 0.
double preference_accuracy(const ToyPolicy& p, const std::vector<FactPair>& pairs);

// CSV with rows Entity, Relation, Attribute, Macro, Std, SampleStd and one
// column per named report. Missing categories are left blank.
std::string fact_distance_csv(const std::vector<std::pair<std::string, FactDistanceReport>>& reports);

}  // namespace geohalu::align
