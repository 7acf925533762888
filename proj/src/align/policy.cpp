#include "geohalu/align/policy.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "geohalu/error.hpp"
#include "geohalu/random.hpp"

namespace geohalu::align {

std::string_view to_string(LogProbMode m) { return m == LogProbMode::SumTokens ? "sum" : "mean"; }

std::size_t LogitTable::n_contexts() const {
  std::size_t n = 1;
  for (std::size_t i = 1; i < order; ++i) n *= vocab + 1;
  return n;
}

std::size_t LogitTable::context_at(std::span<const int> tokens, std::size_t pos) const {
  // Mixed radix over the previous order-1 tokens, oldest most significant.
  std::size_t ctx = 0;
  for (std::size_t back = order - 1; back >= 1; --back) {
    const std::size_t tok = pos >= back ? static_cast<std::size_t>(tokens[pos - back]) : bos();
    ctx = ctx * (vocab + 1) + tok;
  }
  return ctx;
}

ToyPolicy::ToyPolicy(std::size_t vocab, std::size_t order) : vocab_(vocab), order_(order) {
  if (vocab == 0) throw ValidationError("policy vocabulary must be non-empty");
  if (order == 0) throw ValidationError("n-gram order must be >= 1");
  n_contexts_ = LogitTable{vocab, order, nullptr}.n_contexts();
  if (n_contexts_ > std::numeric_limits<std::size_t>::max() / vocab / 8)
    throw ValidationError("policy table too large");
  theta_.assign(n_contexts_ * vocab, 0.0);
  ref_ = theta_;
}

ToyPolicy ToyPolicy::random(std::size_t vocab, std::size_t order, std::uint64_t seed, double scale) {
  ToyPolicy p(vocab, order);
  Rng rng(seed);
  for (auto& x : p.theta_) x = scale * rng.normal();
  p.ref_ = p.theta_;
  return p;
}

void ToyPolicy::set_reference(std::vector<double> ref) {
  if (ref.size() != theta_.size()) throw ValidationError("reference table has the wrong size");
  ref_ = std::move(ref);
}

void ToyPolicy::check(const Sequence& s) const {
  if (s.completion.empty()) throw ValidationError("empty completion");
  auto ok = [&](int t) { return t >= 0 && static_cast<std::size_t>(t) < vocab_; };
  for (int t : s.prompt)
    if (!ok(t)) throw ValidationError("prompt token " + std::to_string(t) + " outside the vocabulary");
  for (int t : s.completion)
    if (!ok(t)) throw ValidationError("completion token " + std::to_string(t) + " outside the vocabulary");
}

namespace {

std::vector<int> joined(const Sequence& s) {
  std::vector<int> all(s.prompt);
  all.insert(all.end(), s.completion.begin(), s.completion.end());
  return all;
}

double log_sum_exp(const double* row, std::size_t n) {
  double m = row[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, row[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(row[i] - m);
  return m + std::log(s);
}

double logprob_one(const LogitTable& t, const Sequence& s, LogProbMode mode) {
  if (s.completion.empty()) throw ValidationError("empty completion");
  const auto all = joined(s);
  double total = 0.0;
  for (std::size_t pos = s.prompt.size(); pos < all.size(); ++pos) {
    const double* row = t.data + t.context_at(all, pos) * t.vocab;
    total += row[all[pos]] - log_sum_exp(row, t.vocab);
  }
  return mode == LogProbMode::MeanTokens ? total / static_cast<double>(s.completion.size()) : total;
}

// Softmax rows of every completion position of one sequence.
struct PositionGrads {
  std::vector<std::size_t> contexts;
  std::vector<int> tokens;
  std::vector<double> probs;  // contexts.size() * vocab
};

PositionGrads position_grads(const LogitTable& t, const Sequence& s) {
  PositionGrads g;
  const auto all = joined(s);
  const std::size_t L = s.completion.size();
  g.contexts.reserve(L);
  g.tokens.reserve(L);
  g.probs.resize(L * t.vocab);
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t pos = s.prompt.size() + k;
    const std::size_t ctx = t.context_at(all, pos);
    const double* row = t.data + ctx * t.vocab;
    const double lse = log_sum_exp(row, t.vocab);
    for (std::size_t v = 0; v < t.vocab; ++v) g.probs[k * t.vocab + v] = std::exp(row[v] - lse);
    g.contexts.push_back(ctx);
    g.tokens.push_back(all[pos]);
  }
  return g;
}

void reduce(const LogitTable& t, const PositionGrads& g, double weight, LogProbMode mode,
            std::span<double> grad) {
  const std::size_t L = g.contexts.size();
  const double w = mode == LogProbMode::MeanTokens ? weight / static_cast<double>(L) : weight;
  for (std::size_t k = 0; k < L; ++k) {
    double* out = grad.data() + g.contexts[k] * t.vocab;
    const double* p = g.probs.data() + k * t.vocab;
    for (std::size_t v = 0; v < t.vocab; ++v) out[v] -= w * p[v];
    out[g.tokens[k]] += w;
  }
}

void check_sizes(const LogitTable& t, std::span<const Sequence> seqs, std::span<const double> weights,
                 std::span<double> grad) {
  if (weights.size() != seqs.size()) throw ValidationError("one weight per sequence required");
  if (grad.size() != t.n_contexts() * t.vocab) throw ValidationError("gradient buffer has the wrong size");
}

}  // namespace

double seq_logprob(const LogitTable& t, const Sequence& s, LogProbMode mode) {
  return logprob_one(t, s, mode);
}

double seq_logprob(const ToyPolicy& p, const Sequence& s, LogProbMode mode) {
  p.check(s);
  return logprob_one(p.theta_table(), s, mode);
}

std::vector<double> batch_logprob(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode) {
  std::vector<double> out(seqs.size());
  for (const auto& s : seqs)
    if (s.completion.empty()) throw ValidationError("empty completion");
  const auto n = static_cast<std::ptrdiff_t>(seqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = logprob_one(t, seqs[i], mode);
  return out;
}

std::vector<double> batch_logprob_serial(const LogitTable& t, std::span<const Sequence> seqs,
                                         LogProbMode mode) {
  std::vector<double> out(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) out[i] = logprob_one(t, seqs[i], mode);
  return out;
}

void accumulate_logprob_grad(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode,
                             std::span<const double> weights, std::span<double> grad) {
  check_sizes(t, seqs, weights, grad);
  for (const auto& s : seqs)
    if (s.completion.empty()) throw ValidationError("empty completion");
  std::vector<PositionGrads> slots(seqs.size());
  const auto n = static_cast<std::ptrdiff_t>(seqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (weights[i] != 0.0) slots[i] = position_grads(t, seqs[i]);
  for (std::size_t i = 0; i < seqs.size(); ++i)
    if (weights[i] != 0.0) reduce(t, slots[i], weights[i], mode, grad);
}

void accumulate_logprob_grad_serial(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode,
                                    std::span<const double> weights, std::span<double> grad) {
  check_sizes(t, seqs, weights, grad);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (seqs[i].completion.empty()) throw ValidationError("empty completion");
    if (weights[i] != 0.0) reduce(t, position_grads(t, seqs[i]), weights[i], mode, grad);
  }
}

void save_policy(const ToyPolicy& p, const std::vector<std::string>& tokens, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "geohalupolicy";
  j["version"] = 1;
  j["vocab_size"] = p.vocab_size();
  j["order"] = p.order();
  j["tokens"] = tokens;
  j["theta"] = p.theta();
  j["ref"] = p.ref();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write policy file " + path.string());
  out << j.dump() << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

PolicyFile load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open policy file " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "geohalupolicy")
    throw ParseError("not a geohalupolicy file");
  if (j.value("version", -1) != 1) throw ParseError("unsupported geohalupolicy version");
  try {
    ToyPolicy p(j.at("vocab_size").get<std::size_t>(), j.at("order").get<std::size_t>());
    auto theta = j.at("theta").get<std::vector<double>>();
    auto ref = j.at("ref").get<std::vector<double>>();
    if (theta.size() != p.n_params() || ref.size() != p.n_params())
      throw ParseError("policy tables have the wrong size");
    p.theta() = std::move(theta);
    p.set_reference(std::move(ref));
    auto tokens = j.value("tokens", std::vector<std::string>{});
    if (!tokens.empty() && tokens.size() != p.vocab_size())
      throw ParseError("policy token list does not match its vocabulary size");
    return {std::move(p), std::move(tokens)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed policy file: ") + e.what());
  }
}

}  // namespace geohalu::align
