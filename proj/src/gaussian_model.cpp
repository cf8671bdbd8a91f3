#include "dynlab/gaussian_model.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "dynlab/errors.hpp"
#include "dynlab/parallel.hpp"
#include "dynlab/special_functions.hpp"

namespace dynlab {
namespace {

constexpr std::uint64_t kShardSize = 1ull << 16;

void validate(const GaussianParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.alpha) || !finite(p.beta) || !finite(p.gamma) || !finite(p.sigma) || !finite(p.tau)) {
    throw DomainError("gaussian params: all parameters must be finite");
  }
  if (p.alpha < 0.0 || p.alpha > 1.0) throw DomainError("gaussian params: alpha must lie in [0, 1]");
  if (p.beta < 0.0 || p.beta > 1.0) throw DomainError("gaussian params: beta must lie in [0, 1]");
  if (!(p.gamma > 0.0)) throw DomainError("gaussian params: gamma must be positive");
  if (!(p.sigma > 0.0)) throw DomainError("gaussian params: sigma must be positive");
}

double denominator(const GaussianParams& p) {
  const double g2 = p.gamma * p.gamma;
  const double s2 = p.sigma * p.sigma;
  return p.alpha * p.beta * g2 + (1.0 - p.alpha) * (1.0 - p.beta) * s2;
}

double score_var(const GaussianParams& p) {
  const double bg = p.beta * p.gamma;
  const double ws = (1.0 - p.beta) * p.sigma;
  return bg * bg + ws * ws;
}

std::mt19937_64 shard_engine(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(shard >> 32), static_cast<std::uint32_t>(shard)};
  return std::mt19937_64(seq);
}

std::string describe(const GaussianParams& p) {
  auto num = [](double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  return "gaussian(alpha=" + num(p.alpha) + ", beta=" + num(p.beta) + ", gamma=" + num(p.gamma) +
         ", sigma=" + num(p.sigma) + ", tau=" + num(p.tau) + ")";
}

}  // namespace

GaussianModel::GaussianModel(const GaussianParams& params) : p_(params) {
  validate(p_);
  const double d = denominator(p_);
  if (!(d > 0.0)) {
    throw DegenerateModelError(
        "gaussian params: alpha*beta*gamma^2 + (1-alpha)*(1-beta)*sigma^2 must be positive "
        "(alpha=1 with beta=0, or alpha=0 with beta=1, is degenerate)");
  }
  var_s_ = score_var(p_);
  if (!(var_s_ > 0.0)) throw DegenerateModelError("gaussian params: score variance vanishes");
  k_ = std::sqrt(var_s_) / d;
}

double eval_K(const GaussianParams& params) { return GaussianModel(params).K(); }

PosteriorMeans GaussianModel::posterior_means(double mu, double s) const {
  if (!std::isfinite(mu) || !std::isfinite(s)) throw DomainError("posterior_means: mu and s must be finite");
  const double dev = s - (1.0 - p_.beta) * mu;
  const double e_type = p_.beta * p_.gamma * p_.gamma / var_s_ * dev;
  const double e_wealth = mu + (1.0 - p_.beta) * p_.sigma * p_.sigma / var_s_ * dev;
  return {e_type, e_wealth};
}

double GaussianModel::score_threshold(double mu) const {
  if (!std::isfinite(mu)) throw DomainError("score_threshold: mu must be finite");
  return (1.0 - p_.beta) * mu + std::sqrt(var_s_) * k_ * (p_.tau - (1.0 - p_.alpha) * mu);
}

double GaussianModel::update(double x) const {
  if (!std::isfinite(x)) throw DomainError("update: x must be finite");
  // 1 - Phi(u) == Phi(-u), which keeps precision in the upper tail.
  return normal_cdf(-k_ * (p_.tau - (1.0 - p_.alpha) * x));
}

Derivatives GaussianModel::derivatives(double x) const {
  if (!std::isfinite(x)) throw DomainError("derivatives: x must be finite");
  const double a = 1.0 - p_.alpha;
  const double gap = p_.tau - a * x;
  const double phi = normal_pdf(k_ * gap);
  return {k_ * a * phi, k_ * k_ * k_ * a * a * gap * phi};
}

double GaussianModel::inflection_point() const {
  const double a = 1.0 - p_.alpha;
  if (a <= 0.0) return 1.0;
  if (p_.tau <= 0.0) return 0.0;
  if (p_.tau >= a) return 1.0;
  return p_.tau / a;
}

std::vector<double> GaussianModel::unit_slope_points() const {
  const double a = 1.0 - p_.alpha;
  const double c = k_ * a * kInvSqrt2Pi;
  if (!(c > 1.0)) return {};
  const double u = std::sqrt(2.0 * std::log(c));
  return {(p_.tau - u / k_) / a, (p_.tau + u / k_) / a};
}

double GaussianModel::partial_beta(double x) const {
  const double g2 = p_.gamma * p_.gamma;
  const double s2 = p_.sigma * p_.sigma;
  const double d = denominator(p_);
  const double gap = p_.tau - (1.0 - p_.alpha) * x;
  return (p_.alpha - p_.beta) * gap * normal_pdf(k_ * gap) * g2 * s2 / (std::sqrt(var_s_) * d * d);
}

double GaussianModel::partial_tau(double x) const {
  return -k_ * normal_pdf(k_ * (p_.tau - (1.0 - p_.alpha) * x));
}

UpdateMap GaussianModel::update_map() const {
  UpdateMap m;
  const GaussianModel self = *this;
  m.eval = [self](double x) { return self.update(x); };
  m.derivative = [self](double x) { return self.derivatives(x).first; };
  for (double b : unit_slope_points()) {
    if (b > 0.0 && b < 1.0) m.breakpoints.push_back(b);
  }
  const double infl = inflection_point();
  if (infl > 0.0 && infl < 1.0) m.breakpoints.push_back(infl);
  std::sort(m.breakpoints.begin(), m.breakpoints.end());
  m.descriptor = describe(p_);
  return m;
}

bool contraction_check(const GaussianParams& params) {
  const GaussianModel model(params);
  const double a = 1.0 - params.alpha;
  if (a <= 0.0) return true;
  return model.K() <= kSqrt2Pi / a;
}

bool three_fp_sufficient(const GaussianParams& params) {
  const GaussianModel model(params);
  const double a = 1.0 - params.alpha;
  if (a <= 0.0) return false;
  return model.K() > kSqrt2Pi / a && std::abs(params.tau - a / 2.0) <= 1e-12;
}

AdmitEstimate monte_carlo_admit_fraction(const GaussianModel& model, double mu, std::uint64_t n,
                                         std::uint64_t seed) {
  if (n == 0) throw DomainError("monte_carlo_admit_fraction: n must be at least 1");
  if (!std::isfinite(mu)) throw DomainError("monte_carlo_admit_fraction: mu must be finite");
  const GaussianParams& p = model.params();
  const double s_star = model.score_threshold(mu);
  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<std::uint64_t> counts(shards, 0);

  parallel_for(shards, [&](std::size_t shard) {
    auto rng = shard_engine(seed, shard);
    std::normal_distribution<double> type_dist(0.0, p.gamma);
    std::normal_distribution<double> wealth_dist(mu, p.sigma);
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t end = std::min(n, begin + kShardSize);
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double t = type_dist(rng);
      const double w = wealth_dist(rng);
      if (p.beta * t + (1.0 - p.beta) * w >= s_star) ++hits;
    }
    counts[shard] = hits;
  });

  std::uint64_t admitted = 0;
  for (auto c : counts) admitted += c;
  const double f = static_cast<double>(admitted) / static_cast<double>(n);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n)), admitted, n};
}

ConditionalMeanEstimate monte_carlo_conditional_means(const GaussianModel& model, double mu, double s,
                                                      double half_width, std::uint64_t n,
                                                      std::uint64_t seed) {
  if (n == 0) throw DomainError("monte_carlo_conditional_means: n must be at least 1");
  if (!(half_width > 0.0)) throw DomainError("monte_carlo_conditional_means: half_width must be positive");
  const GaussianParams& p = model.params();
  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  struct Acc {
    double t = 0.0;
    double w = 0.0;
    std::uint64_t hits = 0;
  };
  std::vector<Acc> acc(shards);

  parallel_for(shards, [&](std::size_t shard) {
    auto rng = shard_engine(seed, shard);
    std::normal_distribution<double> type_dist(0.0, p.gamma);
    std::normal_distribution<double> wealth_dist(mu, p.sigma);
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t end = std::min(n, begin + kShardSize);
    Acc a;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double t = type_dist(rng);
      const double w = wealth_dist(rng);
      if (std::abs(p.beta * t + (1.0 - p.beta) * w - s) <= half_width) {
        a.t += t;
        a.w += w;
        ++a.hits;
      }
    }
    acc[shard] = a;
  });

  Acc total;
  for (const auto& a : acc) {
    total.t += a.t;
    total.w += a.w;
    total.hits += a.hits;
  }
  if (total.hits == 0) throw NumericError("monte_carlo_conditional_means: no samples fell in the score window");
  const double h = static_cast<double>(total.hits);
  return {total.t / h, total.w / h, total.hits};
}

}  // namespace dynlab
