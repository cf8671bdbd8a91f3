#pragma once

#include <cstdint>
#include <vector>

#include "dynlab/update_map.hpp"

namespace dynlab {

struct GaussianParams {
  double alpha = 0.0;  // university weight on type
  double beta = 0.0;   // signal weight on type
  double gamma = 1.0;  // type standard deviation
  double sigma = 1.0;  // wealth standard deviation
  double tau = 0.0;    // admission threshold
};

struct PosteriorMeans {
  double e_type;
  double e_wealth;
};

struct Derivatives {
  double first;
  double second;
};

struct AdmitEstimate {
  double fraction;
  double std_error;
  std::uint64_t admitted;
  std::uint64_t samples;
};

/// One group's admission model with type mean 0. Construction validates the
/// parameters and rejects the two corners where K has a zero denominator.
class GaussianModel {
 public:
  explicit GaussianModel(const GaussianParams& params);

  const GaussianParams& params() const { return p_; }
  double K() const { return k_; }
  double score_variance() const { return var_s_; }

  PosteriorMeans posterior_means(double mu, double s) const;
  double score_threshold(double mu) const;

  double update(double x) const;
  Derivatives derivatives(double x) const;
  double inflection_point() const;

  /// Points where f'(x) = 1, i.e. extrema of f(x) - x. Empty when the peak
  /// slope K(1 - alpha)/sqrt(2 pi) does not exceed 1.
  std::vector<double> unit_slope_points() const;

  double partial_beta(double x) const;
  double partial_tau(double x) const;

  UpdateMap update_map() const;

 private:
  GaussianParams p_;
  double var_s_;
  double k_;
};

double eval_K(const GaussianParams& params);

/// K <= sqrt(2 pi)/(1 - alpha); always true for alpha = 1.
bool contraction_check(const GaussianParams& params);

/// K > sqrt(2 pi)/(1 - alpha) and tau = (1 - alpha)/2 within 1e-12.
bool three_fp_sufficient(const GaussianParams& params);

/// Samples n individuals and counts admissions. Deterministic in seed and
/// independent of the worker count.
AdmitEstimate monte_carlo_admit_fraction(const GaussianModel& model, double mu, std::uint64_t n,
                                         std::uint64_t seed);

/// Conditional means of T and W over samples whose score falls within
/// half_width of s. Used only as a test oracle.
struct ConditionalMeanEstimate {
  double e_type;
  double e_wealth;
  std::uint64_t hits;
};
ConditionalMeanEstimate monte_carlo_conditional_means(const GaussianModel& model, double mu, double s,
                                                      double half_width, std::uint64_t n,
                                                      std::uint64_t seed);

}  // namespace dynlab
