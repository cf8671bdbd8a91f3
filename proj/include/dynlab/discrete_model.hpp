#pragma once

#include <array>

#include "dynlab/dynamics.hpp"

namespace dynlab {

/// Binary wealth and type; score = wealth + type.
/// A[i][j] is the chance of being wealthy next round given wealth i and
/// acceptance j (both 0 or 1).
struct DiscreteParams {
  double p = 0.5;          // P[type = 1]
  double beta_thr = 0.5;   // employer threshold
  double alpha_mix = 1.0;  // weight of type in the fit
  std::array<std::array<double, 2>, 2> A{{{0.0, 1.0}, {0.0, 1.0}}};
};

/// Which employer objective decides score-1 candidates.
/// type_only: fit = type. wealth_only: fit = wealth. mixed: fit = alpha t + (1 - alpha) w.
enum class DiscreteCase { type_only = 1, wealth_only = 2, mixed = 3 };

void validate(const DiscreteParams& params);

/// Wealthy fraction at which the score-1 decision flips (type_only or
/// wealth_only). Throws DomainError on a vanishing denominator.
double lambda_star(double p, double beta_thr, DiscreteCase which);

/// lambda (1 - (alpha + p + beta - 2 beta p)) >= p (beta - alpha).
bool accept_condition_case3(double p, double beta_thr, double alpha_mix, double lambda);

/// True when score-1 candidates are accepted at this wealthy fraction.
bool accepts_score_one(const DiscreteParams& params, double lambda, DiscreteCase which);

double discrete_update(const DiscreteParams& params, double lambda, DiscreteCase which);

Trajectory discrete_simulate(const DiscreteParams& params, double lambda0, DiscreteCase which,
                             const IterateOptions& opts = {});

}  // namespace dynlab
