#include "dynlab/discrete_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynlab/errors.hpp"

namespace dynlab {
namespace {

void require_prob(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void validate(const DiscreteParams& params) {
  require_prob(params.p, "discrete: p");
  require_prob(params.beta_thr, "discrete: beta");
  require_prob(params.alpha_mix, "discrete: alpha");
  for (const auto& row : params.A) {
    for (double a : row) require_prob(a, "discrete: entries of A");
  }
}

double lambda_star(double p, double beta_thr, DiscreteCase which) {
  require_prob(p, "lambda_star: p");
  require_prob(beta_thr, "lambda_star: beta");
  const double mix = p + beta_thr - 2.0 * beta_thr * p;
  switch (which) {
    case DiscreteCase::type_only:
      if (!(mix > 0.0)) throw DomainError("lambda_star: p + beta(1 - 2p) vanishes");
      return p * (1.0 - beta_thr) / mix;
    case DiscreteCase::wealth_only:
      if (!(1.0 - mix > 0.0)) throw DomainError("lambda_star: 1 - (p + beta - 2 beta p) vanishes");
      return p * beta_thr / (1.0 - mix);
    case DiscreteCase::mixed:
      break;
  }
  throw DomainError("lambda_star: defined for the type-only and wealth-only cases");
}

bool accept_condition_case3(double p, double beta_thr, double alpha_mix, double lambda) {
  return lambda * (1.0 - (alpha_mix + p + beta_thr - 2.0 * beta_thr * p)) >= p * (beta_thr - alpha_mix);
}

bool accepts_score_one(const DiscreteParams& params, double lambda, DiscreteCase which) {
  switch (which) {
    case DiscreteCase::type_only: return lambda <= lambda_star(params.p, params.beta_thr, which);
    case DiscreteCase::wealth_only: return lambda >= lambda_star(params.p, params.beta_thr, which);
    case DiscreteCase::mixed:
      return accept_condition_case3(params.p, params.beta_thr, params.alpha_mix, lambda);
  }
  throw DomainError("discrete: unknown case");
}

double discrete_update(const DiscreteParams& params, double lambda, DiscreteCase which) {
  validate(params);
  require_prob(lambda, "discrete_update: lambda");
  const auto& A = params.A;
  const double p = params.p;
  double next;
  if (accepts_score_one(params, lambda, which)) {
    next = A[1][1] * lambda + A[0][1] * (1.0 - lambda) * p + A[0][0] * (1.0 - lambda) * (1.0 - p);
  } else {
    next = A[1][1] * lambda * p + A[1][0] * lambda * (1.0 - p) + A[0][0] * (1.0 - lambda);
  }
  return std::clamp(next, 0.0, 1.0);
}

Trajectory discrete_simulate(const DiscreteParams& params, double lambda0, DiscreteCase which,
                             const IterateOptions& opts) {
  validate(params);
  require_prob(lambda0, "discrete_simulate: lambda0");
  return iterate([&](double l) { return discrete_update(params, l, which); }, lambda0, opts);
}

}  // namespace dynlab
