#include "geohalu/align/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "geohalu/error.hpp"

namespace geohalu::align {

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckResult grad_check(const Objective& f, const std::vector<double>& params, double eps) {
  if (!(eps > 0.0)) throw ValidationError("finite-difference step must be > 0");
  std::vector<double> grad;
  f(params, &grad);
  if (grad.size() != params.size()) throw ValidationError("objective returned a gradient of the wrong size");
  GradCheckResult res;
  std::vector<double> x = params;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + eps;
    const double up = f(x, nullptr);
    x[i] = orig - eps;
    const double down = f(x, nullptr);
    x[i] = orig;
    const double numeric = (up - down) / (2.0 * eps);
    const double err = relative_error(grad[i], numeric);
    if (err > res.max_rel_error || i == 0) res = {err, i, grad[i], numeric};
  }
  return res;
}

namespace {

template <class Eval>
Objective over_theta(const ToyPolicy& p, Eval eval) {
  auto base = std::make_shared<ToyPolicy>(p);
  return [base, eval](const std::vector<double>& params, std::vector<double>* grad) {
    ToyPolicy q = *base;
    q.theta() = params;
    LossOutput out = eval(q, grad != nullptr);
    if (grad) *grad = std::move(out.gradient);
    return out.loss;
  };
}

}  // namespace

Objective kto_objective(const ToyPolicy& p, const SequenceBatch& b, const LossConfig& cfg,
                        const BetaDiagnostics* diagnostics) {
  LossOptions opts;
  opts.diagnostics = diagnostics;
  opts.z0_override = estimate_z0(p, b, cfg.logprob_mode);
  return over_theta(p, [b, cfg, opts](const ToyPolicy& q, bool with_grad) {
    LossOptions o = opts;
    o.with_gradient = with_grad;
    return dynamic_kto_loss(q, b, cfg, o);
  });
}

Objective dpo_objective(const ToyPolicy& p, const std::vector<PreferencePair>& pairs, double beta) {
  return over_theta(p, [pairs, beta](const ToyPolicy& q, bool with_grad) {
    return dpo_loss(q, pairs, beta, LogProbMode::SumTokens, with_grad);
  });
}

Objective fact_distance_objective_fn(const ToyPolicy& p, const std::vector<FactPair>& pairs) {
  return over_theta(p, [pairs](const ToyPolicy& q, bool with_grad) {
    return fact_distance_objective(q, pairs, with_grad);
  });
}

}  // namespace geohalu::align
