#pragma once

#include <cstdint>
#include <vector>

#include "geohalu/align/losses.hpp"
#include "geohalu/random.hpp"

namespace geohalu::align {

// Random small problems for gradient checks and property tests.
struct RandomProblemConfig {
  std::size_t vocab = 5;
  std::size_t order = 2;
  std::size_t batch = 8;
  std::size_t max_prompt = 2;
  std::size_t max_completion = 3;
  double theta_scale = 0.5;
  double ref_drift = 0.3;  // reference = theta + N(0, drift^2) per entry
};

ToyPolicy random_policy(const RandomProblemConfig& c, Rng& rng);
std::vector<int> random_tokens(const RandomProblemConfig& c, Rng& rng, std::size_t min_len, std::size_t max_len);
// Random labels and tags, cyclic partners; at least one desirable and one
// undesirable sample when batch >= 2.
SequenceBatch random_batch(const RandomProblemConfig& c, Rng& rng);
std::vector<PreferencePair> random_preference_pairs(const RandomProblemConfig& c, Rng& rng);
// Covers every category when batch >= 3.
std::vector<FactPair> random_fact_pairs(const RandomProblemConfig& c, Rng& rng);
// Positive terms in [0.2, 1.4].
BetaDiagnostics random_diagnostics(std::size_t n, Rng& rng);

}  // namespace geohalu::align
