#include "geohalu/align/random_problems.hpp"

namespace geohalu::align {

ToyPolicy random_policy(const RandomProblemConfig& c, Rng& rng) {
  ToyPolicy p(c.vocab, c.order);
  for (auto& x : p.theta()) x = c.theta_scale * rng.normal();
  std::vector<double> ref = p.theta();
  for (auto& x : ref) x += c.ref_drift * rng.normal();
  p.set_reference(std::move(ref));
  return p;
}

std::vector<int> random_tokens(const RandomProblemConfig& c, Rng& rng, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.index(max_len - min_len + 1);
  std::vector<int> out(len);
  for (auto& t : out) t = static_cast<int>(rng.index(c.vocab));
  return out;
}

SequenceBatch random_batch(const RandomProblemConfig& c, Rng& rng) {
  SequenceBatch b;
  for (std::size_t i = 0; i < c.batch; ++i) {
    Sample s;
    s.seq = {random_tokens(c, rng, 0, c.max_prompt), random_tokens(c, rng, 1, c.max_completion)};
    s.desirable = c.batch >= 2 && i < 2 ? i == 0 : rng.coin();
    s.tag = benchgen::kAllCategories[rng.index(3)];
    b.samples.push_back(std::move(s));
  }
  assign_cyclic_partners(b);
  return b;
}

std::vector<PreferencePair> random_preference_pairs(const RandomProblemConfig& c, Rng& rng) {
  std::vector<PreferencePair> out;
  for (std::size_t i = 0; i < c.batch; ++i)
    out.push_back({random_tokens(c, rng, 0, c.max_prompt), random_tokens(c, rng, 1, c.max_completion),
                   random_tokens(c, rng, 1, c.max_completion)});
  return out;
}

std::vector<FactPair> random_fact_pairs(const RandomProblemConfig& c, Rng& rng) {
  std::vector<FactPair> out;
  for (std::size_t i = 0; i < c.batch; ++i)
    out.push_back({random_tokens(c, rng, 0, c.max_prompt), random_tokens(c, rng, 1, c.max_completion),
                   random_tokens(c, rng, 1, c.max_completion),
                   i < 3 ? benchgen::kAllCategories[i] : benchgen::kAllCategories[rng.index(3)]});
  return out;
}

BetaDiagnostics random_diagnostics(std::size_t n, Rng& rng) {
  BetaDiagnostics d;
  for (std::size_t i = 0; i < n; ++i) d.terms.push_back(rng.uniform(0.2, 1.4));
  return d;
}

}  // namespace geohalu::align
