#include "geohalu/align/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geohalu/align/kmeans.hpp"
#include "geohalu/error.hpp"

namespace geohalu::align {

void validate(const SequenceBatch& b, const ToyPolicy& p) {
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    const auto& s = b.samples[i];
    p.check(s.seq);
    if (b.samples.size() >= 2 && (s.partner == i || s.partner >= b.samples.size()))
      throw ValidationError("sample " + std::to_string(i) + " has an invalid mismatch partner");
  }
}

void assign_cyclic_partners(SequenceBatch& b) {
  const std::size_t n = b.samples.size();
  for (std::size_t i = 0; i < n; ++i) b.samples[i].partner = n < 2 ? 0 : (i + 1) % n;
}

BetaPolicy BetaPolicy::constant(double beta) {
  BetaPolicy b;
  b.kind = Kind::Constant;
  b.beta = beta;
  return b;
}

BetaPolicy BetaPolicy::category(std::map<Category, double> by_category) {
  BetaPolicy b;
  b.kind = Kind::Category;
  b.by_category = std::move(by_category);
  return b;
}

BetaPolicy BetaPolicy::sample_level(double c, double beta_min, double beta_max) {
  BetaPolicy b;
  b.kind = Kind::SampleLevel;
  b.c = c;
  b.beta_min = beta_min;
  b.beta_max = beta_max;
  return b;
}

BetaPolicy BetaPolicy::cluster_level(std::size_t k, std::uint64_t seed, double c, double beta_min,
                                     double beta_max) {
  BetaPolicy b = sample_level(c, beta_min, beta_max);
  b.kind = Kind::ClusterLevel;
  b.k = k;
  b.seed = seed;
  return b;
}

std::string_view to_string(BetaPolicy::Kind k) {
  switch (k) {
    case BetaPolicy::Kind::Constant: return "constant";
    case BetaPolicy::Kind::Category: return "category";
    case BetaPolicy::Kind::SampleLevel: return "sample";
    case BetaPolicy::Kind::ClusterLevel: return "cluster";
  }
  return "?";
}

std::optional<BetaPolicy::Kind> parse_beta_kind(std::string_view s) {
  for (auto k : {BetaPolicy::Kind::Constant, BetaPolicy::Kind::Category, BetaPolicy::Kind::SampleLevel,
                 BetaPolicy::Kind::ClusterLevel})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

void validate(const BetaPolicy& b) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  switch (b.kind) {
    case BetaPolicy::Kind::Constant:
      if (!positive(b.beta)) throw ValidationError("beta must be > 0");
      break;
    case BetaPolicy::Kind::Category:
      for (const auto& [cat, beta] : b.by_category)
        if (!positive(beta)) throw ValidationError("beta for " + std::string(benchgen::to_string(cat)) + " must be > 0");
      break;
    case BetaPolicy::Kind::ClusterLevel:
      if (b.k == 0) throw ValidationError("cluster count must be >= 1");
      [[fallthrough]];
    case BetaPolicy::Kind::SampleLevel:
      if (!positive(b.c)) throw ValidationError("beta scale c must be > 0");
      if (!positive(b.beta_min) || !positive(b.beta_max) || b.beta_min > b.beta_max)
        throw ValidationError("need 0 < beta_min <= beta_max");
      break;
  }
}

std::vector<double> resolve_betas(const BetaPolicy& policy, const SequenceBatch& batch,
                                  const BetaDiagnostics* diagnostics) {
  validate(policy);
  const std::size_t n = batch.size();
  std::vector<double> betas(n);
  auto need_terms = [&] {
    if (!diagnostics || diagnostics->terms.size() != n)
      throw ValidationError(std::string(to_string(policy.kind)) +
                            "-level beta needs precomputed fact-distance terms for every sample");
    for (double t : diagnostics->terms)
      if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("fact-distance terms must be positive");
  };
  auto clamp = [&](double term) { return std::clamp(policy.c / term, policy.beta_min, policy.beta_max); };

  switch (policy.kind) {
    case BetaPolicy::Kind::Constant: std::fill(betas.begin(), betas.end(), policy.beta); break;
    case BetaPolicy::Kind::Category:
      for (std::size_t i = 0; i < n; ++i) {
        auto it = policy.by_category.find(batch.samples[i].tag);
        if (it == policy.by_category.end())
          throw ValidationError("no beta configured for task tag " +
                                std::string(benchgen::to_string(batch.samples[i].tag)));
        betas[i] = it->second;
      }
      break;
    case BetaPolicy::Kind::SampleLevel:
      need_terms();
      for (std::size_t i = 0; i < n; ++i) betas[i] = clamp(diagnostics->terms[i]);
      break;
    case BetaPolicy::Kind::ClusterLevel: {
      need_terms();
      std::vector<std::vector<double>> points;
      if (!diagnostics->features.empty()) {
        if (diagnostics->features.size() != n) throw ValidationError("one feature vector per sample required");
        points = diagnostics->features;
      } else {
        for (double t : diagnostics->terms) points.push_back({t});
      }
      const auto km = kmeans_pp(points, policy.k, policy.seed);
      std::vector<double> sum(policy.k, 0.0);
      std::vector<std::size_t> count(policy.k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        sum[km.assignment[i]] += diagnostics->terms[i];
        ++count[km.assignment[i]];
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = km.assignment[i];
        betas[i] = clamp(sum[c] / static_cast<double>(count[c]));
      }
      break;
    }
  }
  return betas;
}

void validate(const LossConfig& c) {
  if (!(c.lambda_d > 0.0) || !(c.lambda_u > 0.0)) throw ValidationError("lambda_D and lambda_U must be > 0");
  validate(c.beta_policy);
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double reward(const ToyPolicy& p, const Sequence& s, LogProbMode mode) {
  p.check(s);
  return seq_logprob(p.theta_table(), s, mode) - seq_logprob(p.ref_table(), s, mode);
}

namespace {

std::vector<Sequence> main_seqs(const SequenceBatch& b) {
  std::vector<Sequence> out;
  out.reserve(b.size());
  for (const auto& s : b.samples) out.push_back(s.seq);
  return out;
}

std::vector<Sequence> mismatched_seqs(const SequenceBatch& b) {
  std::vector<Sequence> out;
  out.reserve(b.size());
  for (const auto& s : b.samples) out.push_back({s.seq.prompt, b.samples[s.partner].seq.completion});
  return out;
}

std::vector<double> rewards(const ToyPolicy& p, const std::vector<Sequence>& seqs, LogProbMode mode) {
  auto lt = batch_logprob(p.theta_table(), seqs, mode);
  const auto lr = batch_logprob(p.ref_table(), seqs, mode);
  for (std::size_t i = 0; i < lt.size(); ++i) lt[i] -= lr[i];
  return lt;
}

}  // namespace

double estimate_z0(const ToyPolicy& p, const SequenceBatch& b, LogProbMode mode) {
  if (b.size() < 2) throw ValidationError("z0 needs a batch of at least two samples");
  validate(b, p);
  const auto r = rewards(p, mismatched_seqs(b), mode);
  double sum = 0.0;
  for (double x : r) sum += x;
  return std::max(0.0, sum / static_cast<double>(r.size()));
}

double kto_value(double r, double z0, double beta, bool desirable, double lambda_d, double lambda_u) {
  return desirable ? lambda_d * sigmoid(beta * (r - z0)) : lambda_u * sigmoid(beta * (z0 - r));
}

LossOutput dynamic_kto_loss(const ToyPolicy& p, const SequenceBatch& b, const LossConfig& cfg,
                            const LossOptions& opts) {
  validate(cfg);
  if (b.size() == 0) throw ValidationError("empty batch");
  validate(b, p);
  LossOutput out;
  out.z0 = opts.z0_override ? *opts.z0_override : estimate_z0(p, b, cfg.logprob_mode);
  const auto seqs = main_seqs(b);
  const auto r = rewards(p, seqs, cfg.logprob_mode);
  const auto betas = resolve_betas(cfg.beta_policy, b, opts.diagnostics);
  const double inv_n = 1.0 / static_cast<double>(b.size());

  std::vector<double> weights(b.size());
  double total = 0.0;
  out.samples.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const bool des = b.samples[i].desirable;
    const double lambda = des ? cfg.lambda_d : cfg.lambda_u;
    const double t = des ? betas[i] * (r[i] - out.z0) : betas[i] * (out.z0 - r[i]);
    const double s = sigmoid(t);
    const double v = lambda * s;
    out.samples[i] = {r[i], betas[i], v};
    total += lambda - v;
    // d(lambda - v)/dr, averaged over the batch.
    const double dv_dr = lambda * betas[i] * s * sigmoid(-t) * (des ? 1.0 : -1.0);
    weights[i] = -dv_dr * inv_n;
  }
  out.loss = total * inv_n;
  if (opts.with_gradient) {
    out.gradient.assign(p.n_params(), 0.0);
    accumulate_logprob_grad(p.theta_table(), seqs, cfg.logprob_mode, weights, out.gradient);
  }
  return out;
}

LossOutput dpo_loss(const ToyPolicy& p, const std::vector<PreferencePair>& pairs, double beta, LogProbMode mode,
                    bool with_gradient) {
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  if (pairs.empty()) throw ValidationError("no preference pairs");
  std::vector<Sequence> seqs;
  seqs.reserve(2 * pairs.size());
  for (const auto& pr : pairs) seqs.push_back({pr.prompt, pr.chosen});
  for (const auto& pr : pairs) seqs.push_back({pr.prompt, pr.rejected});
  for (const auto& s : seqs) p.check(s);
  const auto r = rewards(p, seqs, mode);
  const std::size_t n = pairs.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  LossOutput out;
  std::vector<double> weights(2 * n);
  double total = 0.0;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double margin = r[i] - r[n + i];
    total += softplus(-beta * margin);
    out.samples[i] = {margin, beta, sigmoid(beta * margin)};
    const double g = -beta * sigmoid(-beta * margin) * inv_n;
    weights[i] = g;
    weights[n + i] = -g;
  }
  out.loss = total * inv_n;
  if (with_gradient) {
    out.gradient.assign(p.n_params(), 0.0);
    accumulate_logprob_grad(p.theta_table(), seqs, mode, weights, out.gradient);
  }
  return out;
}

namespace {

std::vector<Sequence> fact_seqs(const ToyPolicy& p, const std::vector<FactPair>& pairs) {
  std::vector<Sequence> seqs;
  seqs.reserve(2 * pairs.size());
  for (const auto& f : pairs) seqs.push_back({f.prompt, f.factual});
  for (const auto& f : pairs) seqs.push_back({f.prompt, f.hallucinated});
  for (const auto& s : seqs) p.check(s);
  return seqs;
}

std::vector<double> fact_margins(const ToyPolicy& p, const std::vector<Sequence>& seqs) {
  const auto lp = batch_logprob(p.theta_table(), seqs, LogProbMode::MeanTokens);
  const std::size_t n = seqs.size() / 2;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = lp[i] - lp[n + i];
  return z;
}

double population_std(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

FactDistanceReport fact_distance(const ToyPolicy& p, const std::vector<FactPair>& pairs) {
  FactDistanceReport rep;
  rep.n = pairs.size();
  const auto z = fact_margins(p, fact_seqs(p, pairs));
  std::array<double, 3> sum{};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double term = softplus(-z[i]);
    rep.terms.push_back(term);
    const auto c = static_cast<std::size_t>(pairs[i].tag);
    sum[c] += term;
    ++rep.category_n[c];
  }
  std::vector<double> means;
  for (auto cat : benchgen::kAllCategories) {
    const auto c = static_cast<std::size_t>(cat);
    if (rep.category_n[c] == 0) {
      rep.missing.push_back(cat);
      continue;
    }
    rep.category_mean[c] = sum[c] / static_cast<double>(rep.category_n[c]);
    means.push_back(*rep.category_mean[c]);
  }
  if (!means.empty()) {
    for (double m : means) rep.macro += m;
    rep.macro /= static_cast<double>(means.size());
  }
  rep.std_across_categories = population_std(means);
  rep.std_across_samples = population_std(rep.terms);
  return rep;
}

LossOutput fact_distance_objective(const ToyPolicy& p, const std::vector<FactPair>& pairs, bool with_gradient) {
  if (pairs.empty()) throw ValidationError("no fact pairs");
  const auto seqs = fact_seqs(p, pairs);
  const auto z = fact_margins(p, seqs);
  const std::size_t n = pairs.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  LossOutput out;
  std::vector<double> weights(2 * n);
  double total = 0.0;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    total += softplus(-z[i]);
    out.samples[i] = {z[i], 0.0, sigmoid(z[i])};
    const double g = -sigmoid(-z[i]) * inv_n;
    weights[i] = g;
    weights[n + i] = -g;
  }
  out.loss = total * inv_n;
  if (with_gradient) {
    out.gradient.assign(p.n_params(), 0.0);
    accumulate_logprob_grad(p.theta_table(), seqs, LogProbMode::MeanTokens, weights, out.gradient);
  }
  return out;
}

double preference_accuracy(const ToyPolicy& p, const std::vector<FactPair>& pairs) {
  if (pairs.empty()) return 0.0;
  const auto z = fact_margins(p, fact_seqs(p, pairs));
  std::size_t wins = 0;
  for (double x : z) wins += x > 0.0 ? 1 : 0;
  return static_cast<double>(wins) / static_cast<double>(z.size());
}

std::string fact_distance_csv(const std::vector<std::pair<std::string, FactDistanceReport>>& reports) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  std::string out = "Metric";
  for (const auto& [name, rep] : reports) out += "," + name;
  out += "\n";
  for (auto cat : benchgen::kAllCategories) {
    out += benchgen::to_string(cat);
    for (const auto& [name, rep] : reports) out += "," + (rep.mean(cat) ? num(*rep.mean(cat)) : std::string());
    out += "\n";
  }
  auto row = [&](const char* label, double FactDistanceReport::*field) {
    out += label;
    for (const auto& [name, rep] : reports) out += "," + num(rep.*field);
    out += "\n";
  };
  row("Macro", &FactDistanceReport::macro);
  row("Std", &FactDistanceReport::std_across_categories);
  row("SampleStd", &FactDistanceReport::std_across_samples);
  return out;
}

}  // namespace geohalu::align
