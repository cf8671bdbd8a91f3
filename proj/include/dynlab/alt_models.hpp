#pragma once

#include <optional>

namespace dynlab {

/// Bernoulli type T in {0, 1}, Gaussian wealth W ~ N(mu, sigma^2), score T + W.
struct BernGaussParams {
  double p = 0.5;          // P[T = 1], strictly inside (0, 1)
  double beta_thr = 0.5;   // hiring threshold, strictly inside (0, 1)
  double sigma = 1.0;
  double alpha_mix = 1.0;  // weight of type in the employer objective
};

void validate(const BernGaussParams& params);

/// Offset k with "hire iff s >= mu + k" when alpha = 1.
double bg_threshold_k(const BernGaussParams& params);

/// P[T = 1 | S = s] for wealth mean mu.
double bg_posterior_type(const BernGaussParams& params, double mu, double s);

/// Cutoff s* of the rule (2 alpha - 1) P[T=1 | S=s] >= beta - (1 - alpha) s.
/// Found by bisection for every alpha. Throws NumericError if the bracket
/// cannot be found or the rule has more than one crossing.
double bg_score_cutoff(const BernGaussParams& params, double mu);

/// Next wealth mean P[S >= s*]. alpha = 1 and alpha = 1/2 use closed-form
/// cutoffs; other alphas use bg_score_cutoff.
double bg_update(const BernGaussParams& params, double mu);

/// Closed form for alpha = 1 (zero) and alpha = 1/2; central differences otherwise.
double bg_update_derivative(const BernGaussParams& params, double mu);

/// Wealth follows Pareto(x_m, shape); employer cares only about type.
struct ParetoParams {
  double x_m = 1.0;
  double shape = 1.0;
  double p = 0.5;
  double beta_thr = 0.5;
};

void validate(const ParetoParams& params);

struct ParetoAcceptance {
  double f = 0.0;          // (p/(1-p) * (1-beta)/beta)^(1/(shape+1))
  bool accept_all = false;
  double lo = 0.0;         // accepted scores [lo, hi] when !accept_all
  double hi = 0.0;
  bool empty = false;
};

ParetoAcceptance pareto_acceptance(const ParetoParams& params);

}  // namespace dynlab
