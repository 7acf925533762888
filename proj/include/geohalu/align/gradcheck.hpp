#pragma once

#include <functional>
#include <vector>

#include "geohalu/align/losses.hpp"

namespace geohalu::align {

// Value at `params`; fills `grad` (resized to params.size()) when non-null.
using Objective = std::function<double(const std::vector<double>& params, std::vector<double>* grad)>;

// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central differences with step eps on every parameter.
GradCheckResult grad_check(const Objective& f, const std::vector<double>& params, double eps = 1e-5);

// Objectives over a policy's theta. The KTO objective freezes z0 at its
// value for the given policy.
Objective kto_objective(const ToyPolicy& p, const SequenceBatch& b, const LossConfig& cfg,
                        const BetaDiagnostics* diagnostics = nullptr);
Objective dpo_objective(const ToyPolicy& p, const std::vector<PreferencePair>& pairs, double beta);
Objective fact_distance_objective_fn(const ToyPolicy& p, const std::vector<FactPair>& pairs);

}  // namespace geohalu::align
