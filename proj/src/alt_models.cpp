#include "dynlab/alt_models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dynlab/errors.hpp"
#include "dynlab/special_functions.hpp"
#include "dynlab/update_map.hpp"

namespace dynlab {
namespace {

void require_interior(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0 && v < 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

double log_odds(double p) { return std::log(p / (1.0 - p)); }

// Hiring margin: non-negative exactly when a score s is hired.
double margin(const BernGaussParams& q, double mu, double s) {
  return (2.0 * q.alpha_mix - 1.0) * bg_posterior_type(q, mu, s) - q.beta_thr + (1.0 - q.alpha_mix) * s;
}

double update_at_cutoff(const BernGaussParams& q, double mu, double s_star) {
  return (1.0 - q.p) * normal_cdf((mu - s_star) / q.sigma) + q.p * normal_cdf((mu + 1.0 - s_star) / q.sigma);
}

}  // namespace

void validate(const BernGaussParams& params) {
  require_interior(params.p, "bern-gauss: p");
  require_interior(params.beta_thr, "bern-gauss: beta");
  if (!std::isfinite(params.sigma) || !(params.sigma > 0.0)) throw DomainError("bern-gauss: sigma must be positive");
  if (!std::isfinite(params.alpha_mix) || params.alpha_mix < 0.0 || params.alpha_mix > 1.0) {
    throw DomainError("bern-gauss: alpha must lie in [0, 1]");
  }
}

double bg_threshold_k(const BernGaussParams& params) {
  validate(params);
  const double s2 = params.sigma * params.sigma;
  return 0.5 - s2 * (std::log(1.0 / params.beta_thr - 1.0) + log_odds(params.p));
}

double bg_posterior_type(const BernGaussParams& params, double mu, double s) {
  validate(params);
  if (!std::isfinite(mu) || !std::isfinite(s)) throw DomainError("bern-gauss: mu and s must be finite");
  const double s2 = params.sigma * params.sigma;
  const double lo = log_odds(params.p) + (2.0 * (s - mu) - 1.0) / (2.0 * s2);
  return 1.0 / (1.0 + std::exp(-lo));
}

double bg_score_cutoff(const BernGaussParams& params, double mu) {
  validate(params);
  if (!std::isfinite(mu)) throw DomainError("bern-gauss: mu must be finite");
  double lo = mu - 10.0 * params.sigma;
  double hi = mu + 10.0 * params.sigma + 1.0;
  int expansions = 0;
  while (!(margin(params, mu, lo) < 0.0 && margin(params, mu, hi) >= 0.0)) {
    if (++expansions > 60) throw NumericError("bg_score_cutoff: could not bracket the cutoff");
    const double w = hi - lo;
    lo -= w;
    hi += w;
  }

  // Below alpha = 1/2 the posterior term is decreasing; the margin stays
  // monotone only while its slope bound beats the posterior's steepest slope.
  const double a = params.alpha_mix;
  if (a < 0.5 && (1.0 - 2.0 * a) / (4.0 * params.sigma * params.sigma) >= 1.0 - a) {
    constexpr int kCells = 4096;
    int changes = 0;
    double prev = margin(params, mu, lo);
    for (int i = 1; i <= kCells; ++i) {
      const double cur = margin(params, mu, lo + (hi - lo) * i / kCells);
      if ((prev < 0.0) != (cur < 0.0)) ++changes;
      prev = cur;
    }
    if (changes > 1) throw NumericError("bg_score_cutoff: hiring rule has more than one cutoff");
  }

  for (int i = 0; i < 2000; ++i) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (margin(params, mu, m) >= 0.0) {
      hi = m;
    } else {
      lo = m;
    }
  }
  return hi;
}

double bg_update(const BernGaussParams& params, double mu) {
  validate(params);
  if (!std::isfinite(mu)) throw DomainError("bern-gauss: mu must be finite");
  double s_star;
  if (params.alpha_mix == 1.0) {
    s_star = mu + bg_threshold_k(params);
  } else if (params.alpha_mix == 0.5) {
    s_star = 2.0 * params.beta_thr;
  } else {
    s_star = bg_score_cutoff(params, mu);
  }
  return update_at_cutoff(params, mu, s_star);
}

double bg_update_derivative(const BernGaussParams& params, double mu) {
  validate(params);
  if (params.alpha_mix == 1.0) return 0.0;
  if (params.alpha_mix == 0.5) {
    const double b2 = 2.0 * params.beta_thr;
    return ((1.0 - params.p) * normal_pdf((b2 - mu) / params.sigma) +
            params.p * normal_pdf((b2 - mu - 1.0) / params.sigma)) /
           params.sigma;
  }
  return central_difference([&](double m) { return bg_update(params, m); }, mu, 1e-6);
}

void validate(const ParetoParams& params) {
  if (!std::isfinite(params.x_m) || !(params.x_m > 0.0)) throw DomainError("pareto: x_m must be positive");
  if (!std::isfinite(params.shape) || !(params.shape > 0.0)) throw DomainError("pareto: shape must be positive");
  require_interior(params.p, "pareto: p");
  require_interior(params.beta_thr, "pareto: beta");
}

ParetoAcceptance pareto_acceptance(const ParetoParams& params) {
  validate(params);
  ParetoAcceptance out;
  const double ratio = params.p / (1.0 - params.p) * (1.0 - params.beta_thr) / params.beta_thr;
  out.f = std::pow(ratio, 1.0 / (params.shape + 1.0));
  if (out.f >= 1.0) {
    out.accept_all = true;
    out.lo = params.x_m;
    out.hi = std::numeric_limits<double>::infinity();
    return out;
  }
  out.lo = params.x_m;
  out.hi = 1.0 / (1.0 - out.f);
  out.empty = out.lo > out.hi;
  return out;
}

}  // namespace dynlab
