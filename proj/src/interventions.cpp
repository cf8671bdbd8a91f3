#include "dynlab/interventions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynlab/errors.hpp"
#include "dynlab/special_functions.hpp"

namespace dynlab {
namespace {

constexpr double kGoldenTol = 1e-10;
constexpr double kCompareTol = 1e-10;

// The map is only assumed on [0, 1]; subsidised arguments are clamped to it.
double apply(const GenericUpdateMap& map, double x) { return map(std::clamp(x, 0.0, 1.0)); }

void require_unit_open(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v >= 1.0) {
    throw DomainError(std::string(name) + " must lie in [0, 1)");
  }
}

bool has_three(const FixedPointReport& r) { return r.points.size() == 3 && !r.tangent_degenerate; }

Comparison build_comparison(const GaussianParams& base, const GaussianParams& perturbed, double base_value,
                            double perturbed_value) {
  Comparison c;
  c.base_value = base_value;
  c.perturbed_value = perturbed_value;
  c.base = find_fixed_points(base);
  try {
    c.perturbed = find_fixed_points(perturbed);
  } catch (const DegenerateModelError& e) {
    c.note = std::string("perturbed model is degenerate: ") + e.what();
    return c;
  }
  if (!has_three(c.base) || !has_three(c.perturbed)) {
    c.note = "not comparable: three fixed points do not exist at both parameter values";
    return c;
  }
  c.comparable = true;
  for (std::size_t i = 0; i < 3; ++i) c.diffs[i] = c.perturbed.points[i].z - c.base.points[i].z;
  return c;
}

}  // namespace

GenericUpdateMap::GenericUpdateMap(UpdateMap map) : map_(std::move(map)) {
  report_ = find_fixed_points(map_);
  if (report_.points.size() != 3 || report_.tangent_degenerate) {
    throw ShapeViolationError("generic map: exactly three non-tangent fixed points are required");
  }
  classify_basins(report_, map_);

  constexpr int kSamples = 4096;
  double prev = map_.eval(0.0);
  for (int i = 1; i <= kSamples; ++i) {
    const double x = static_cast<double>(i) / kSamples;
    const double y = map_.eval(x);
    if (y < prev) throw ShapeViolationError("generic map: f must be non-decreasing on [0, 1]");
    prev = y;
  }

  const double z[] = {0.0, z1(), z2(), z3(), 1.0};
  for (int k = 0; k < 4; ++k) {
    const bool above = (k % 2 == 0);
    for (int i = 1; i < 64; ++i) {
      const double x = z[k] + (z[k + 1] - z[k]) * i / 64.0;
      const double g = map_.eval(x) - x;
      if (above ? !(g > 0.0) : !(g < 0.0)) {
        throw ShapeViolationError("generic map: f - id does not alternate in sign between fixed points");
      }
    }
  }
}

GenericUpdateMap GenericUpdateMap::from_gaussian(const GaussianParams& params) {
  return GenericUpdateMap(GaussianModel(params).update_map());
}

Comparison compare_threshold(const GaussianParams& params, double tau_prime) {
  if (!std::isfinite(tau_prime)) throw DomainError("compare_threshold: tau_prime must be finite");
  if (tau_prime > params.tau) throw DomainError("compare_threshold: tau_prime must not exceed tau");
  GaussianParams perturbed = params;
  perturbed.tau = tau_prime;
  Comparison c = build_comparison(params, perturbed, params.tau, tau_prime);
  if (c.comparable) {
    if (tau_prime == params.tau) {
      c.theorem_holds = c.diffs[0] == 0.0 && c.diffs[1] == 0.0 && c.diffs[2] == 0.0;
    } else {
      c.theorem_holds = c.diffs[0] > 0.0 && c.diffs[2] > 0.0 && c.diffs[1] < 0.0;
    }
  }
  return c;
}

Comparison compare_beta(const GaussianParams& params, double beta_prime) {
  if (!std::isfinite(beta_prime)) throw DomainError("compare_beta: beta_prime must be finite");
  const double lo = std::min(params.beta, params.alpha);
  const double hi = std::max(params.beta, params.alpha);
  if (beta_prime != params.beta && !(beta_prime > lo && beta_prime < hi)) {
    throw DomainError("compare_beta: beta_prime must lie strictly between beta and alpha");
  }
  GaussianParams perturbed = params;
  perturbed.beta = beta_prime;
  Comparison c = build_comparison(params, perturbed, params.beta, beta_prime);
  if (c.comparable) {
    if (beta_prime == params.beta) {
      c.theorem_holds = c.diffs[0] == 0.0 && c.diffs[1] == 0.0 && c.diffs[2] == 0.0;
    } else {
      c.theorem_holds = c.diffs[0] > 0.0 && c.diffs[2] < 0.0;
    }
  }
  return c;
}

DeltaReport compute_delta(const GenericUpdateMap& map) {
  const double a = map.z1();
  const double b = map.z2();
  auto h = [&](double x) { return x - map(x); };

  constexpr int kCells = 1024;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kCells; ++i) {
    const double x = a + (b - a) * i / kCells;
    const double v = h(x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = a + (b - a) * std::max(best - 1, 0) / kCells;
  double hi = a + (b - a) * std::min(best + 1, kCells) / kCells;
  double best_x = a + (b - a) * best / kCells;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double h1 = h(x1);
  double h2 = h(x2);
  while (hi - lo > kGoldenTol) {
    if (h1 < h2) {
      lo = x1;
      x1 = x2;
      h1 = h2;
      x2 = lo + inv_phi * (hi - lo);
      h2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      h2 = h1;
      x1 = hi - inv_phi * (hi - lo);
      h1 = h(x1);
    }
  }
  const double xm = 0.5 * (lo + hi);
  const double hm = h(xm);
  if (hm > best_val) {
    best_val = hm;
    best_x = xm;
  }
  return {std::max(best_val, 0.0), best_x};
}

SubsidyPlan simulate_subsidy(const GenericUpdateMap& map, double cost_c, double lambda_weight, double rho,
                             double mu0, std::size_t max_steps) {
  if (!std::isfinite(cost_c) || cost_c < 0.0) throw DomainError("simulate_subsidy: C must be non-negative");
  require_unit_open(lambda_weight, "simulate_subsidy: lambda");
  require_unit_open(rho, "simulate_subsidy: rho");
  if (!std::isfinite(mu0) || mu0 < map.z1() || mu0 >= map.z2()) {
    throw DomainError("simulate_subsidy: mu0 must lie in [z1, z2)");
  }
  if (max_steps == 0) throw DomainError("simulate_subsidy: max_steps must be positive");

  SubsidyPlan plan;
  plan.cost_c = cost_c;
  plan.lambda_weight = lambda_weight;
  plan.rho = rho;
  plan.mu0 = mu0;
  plan.z2 = map.z2();
  plan.states.push_back(mu0);

  const double z1 = map.z1();
  const double z2 = map.z2();
  double disc = 1.0;
  for (std::size_t t = 0; t < max_steps; ++t) {
    const double mu = plan.states[t];
    const bool active = mu >= z1 - kCrossingTol && mu < z2 - kCrossingTol;
    const double c = active ? cost_c : 0.0;
    plan.loss_cost_part += lambda_weight * disc * c;
    if (t >= 1) plan.loss_distance_part += (1.0 - lambda_weight) * disc * (z2 - mu);
    const double next = apply(map, mu + c);
    plan.states.push_back(next);
    disc *= rho;
    if (next >= z2 - kCrossingTol) {
      plan.horizon_T = t + 1;
      plan.reachable = true;
      break;
    }
  }
  if (!plan.reachable) plan.horizon_T = max_steps;
  plan.loss = plan.loss_cost_part + plan.loss_distance_part;
  return plan;
}

std::vector<double> subsidy_cost_grid(double delta, double gap) {
  if (gap <= delta) return {gap};
  std::vector<double> grid(64);
  for (int i = 0; i < 64; ++i) {
    grid[i] = delta + (gap - delta) * std::pow(10.0, -4.0 * (63 - i) / 63.0);
  }
  grid[63] = gap;
  return grid;
}

OptimalityVerdict check_one_shot_optimality(const GenericUpdateMap& map, double lambda_weight, double rho,
                                            double mu0, std::optional<double> candidate_c) {
  OptimalityVerdict v;
  v.lambda_weight = lambda_weight;
  v.rho = rho;
  v.mu0 = mu0;
  v.z2 = map.z2();
  v.delta = compute_delta(map).delta;
  const double gap = v.z2 - mu0;
  v.one_shot_cost = gap;
  const SubsidyPlan one_shot = simulate_subsidy(map, gap, lambda_weight, rho, mu0);
  v.one_shot_loss = one_shot.loss;
  v.rho_ge_lambda = rho >= lambda_weight;

  v.candidate_c = candidate_c.value_or(std::min(v.delta + 1e-4, gap));
  if (!std::isfinite(v.candidate_c) || v.candidate_c < 0.0) {
    throw DomainError("check_one_shot_optimality: candidate C must be non-negative");
  }
  v.candidate_condition = rho < lambda_weight * (1.0 - v.candidate_c / gap);
  v.min_cost_condition = rho < lambda_weight * (1.0 - v.delta / gap);
  v.candidate_plan = simulate_subsidy(map, v.candidate_c, lambda_weight, rho, mu0);
  v.candidate_beats_one_shot = v.candidate_plan.reachable && v.candidate_plan.loss < v.one_shot_loss;

  v.best_grid_loss = std::numeric_limits<double>::infinity();
  v.one_shot_best_on_grid = true;
  for (double c : subsidy_cost_grid(v.delta, gap)) {
    const SubsidyPlan plan = simulate_subsidy(map, c, lambda_weight, rho, mu0);
    v.grid.push_back({c, plan.loss, plan.horizon_T, plan.reachable});
    if (!plan.reachable) continue;
    if (plan.loss < v.best_grid_loss) {
      v.best_grid_loss = plan.loss;
      v.best_grid_c = c;
    }
    if (v.one_shot_loss > plan.loss + kCompareTol) v.one_shot_best_on_grid = false;
  }

  if (v.rho_ge_lambda) {
    v.precondition = "rho>=lambda";
  } else if (v.candidate_condition) {
    v.precondition = "candidate";
  } else {
    v.precondition = "neither";
  }
  return v;
}

DiscretizedSubsidyProblem::DiscretizedSubsidyProblem(const GenericUpdateMap& map, double lambda_weight,
                                                     double rho, std::size_t wealth_grid, std::size_t cost_grid)
    : lambda_(lambda_weight), rho_(rho), z2_(map.z2()) {
  require_unit_open(lambda_weight, "dp: lambda");
  require_unit_open(rho, "dp: rho");
  if (wealth_grid < 2 || cost_grid < 2) throw DomainError("dp: grids need at least 2 points");

  const double delta = compute_delta(map).delta;
  const double lo = map.z1() - delta;
  const double hi = map.z2() + delta;
  const double h = (hi - lo) / static_cast<double>(wealth_grid - 1);
  wealth_.resize(wealth_grid);
  for (std::size_t i = 0; i < wealth_grid; ++i) wealth_[i] = lo + h * static_cast<double>(i);
  wealth_.back() = hi;

  const double c_max = map.z2() - map.z1() + delta + h;
  costs_.resize(cost_grid);
  for (std::size_t j = 0; j < cost_grid; ++j) {
    costs_[j] = c_max * static_cast<double>(j) / static_cast<double>(cost_grid - 1);
  }

  next_.assign(wealth_grid * cost_grid, std::nullopt);
  for (std::size_t i = 0; i < wealth_grid; ++i) {
    if (is_target(i)) continue;
    for (std::size_t j = 0; j < cost_grid; ++j) {
      const double y = apply(map, wealth_[i] + costs_[j]);
      if (y >= z2_ - kCrossingTol) continue;
      const std::size_t k = snap(y);
      snap_error_ = std::max(snap_error_, std::abs(y - wealth_[k]));
      next_[i * cost_grid + j] = k;
    }
  }
}

std::size_t DiscretizedSubsidyProblem::snap(double mu) const {
  const double lo = wealth_.front();
  const double h = wealth_[1] - wealth_[0];
  const double raw = std::floor((mu - lo) / h);
  std::size_t k = raw <= 0.0 ? 0 : std::min(static_cast<std::size_t>(raw), wealth_.size() - 1);
  while (k + 1 < wealth_.size() && wealth_[k + 1] <= mu) ++k;
  while (k > 0 && wealth_[k] > mu) --k;
  return k;
}

std::optional<std::size_t> DiscretizedSubsidyProblem::next(std::size_t state, std::size_t action) const {
  return next_[state * costs_.size() + action];
}

double DiscretizedSubsidyProblem::loss_along(std::size_t start, const std::vector<std::size_t>& actions) const {
  double loss = 0.0;
  double disc = 1.0;
  std::size_t state = start;
  for (std::size_t a : actions) {
    loss += lambda_ * disc * costs_[a];
    const auto nx = next(state, a);
    if (!nx) break;
    disc *= rho_;
    loss += (1.0 - lambda_) * disc * (z2_ - wealth_[*nx]);
    state = *nx;
  }
  return loss;
}

DpResult DiscretizedSubsidyProblem::solve(double mu0) const {
  if (!std::isfinite(mu0)) throw DomainError("dp: mu0 must be finite");
  DpResult out;
  out.wealth_step = wealth_[1] - wealth_[0];
  out.cost_step = costs_[1] - costs_[0];
  out.snap_error = snap_error_;
  if (mu0 >= z2_ - kCrossingTol) {
    out.reaches_target = true;
    out.start_state = mu0;
    return out;
  }
  if (mu0 < wealth_.front()) throw DomainError("dp: mu0 lies below the wealth grid");

  const std::size_t n = wealth_.size();
  const std::size_t m = costs_.size();
  std::vector<double> value(n, 0.0);
  std::vector<double> fresh(n, 0.0);
  std::vector<std::size_t> policy(n, 0);

  auto backup = [&](std::size_t i, std::size_t& arg) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double q = lambda_ * costs_[j];
      if (const auto nx = next(i, j)) q += rho_ * ((1.0 - lambda_) * (z2_ - wealth_[*nx]) + value[*nx]);
      if (j == 0 || q < best - 1e-15 * std::max(1.0, std::abs(best))) {
        best = q;
        arg = j;
      }
    }
    return best;
  };

  constexpr std::size_t kMaxSweeps = 100000;
  for (;;) {
    if (out.sweeps >= kMaxSweeps) throw NumericError("dp: value iteration did not converge in 1e5 sweeps");
    ++out.sweeps;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_target(i)) {
        fresh[i] = 0.0;
        continue;
      }
      fresh[i] = backup(i, policy[i]);
      change = std::max(change, std::abs(fresh[i] - value[i]));
    }
    value.swap(fresh);
    if (change <= 1e-13) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_target(i)) backup(i, policy[i]);
  }

  const std::size_t start = snap(mu0);
  out.start_state = wealth_[start];
  std::vector<std::size_t> actions;
  std::vector<bool> seen(n, false);
  std::size_t state = start;
  out.states.push_back(wealth_[state]);
  for (;;) {
    if (seen[state]) break;
    seen[state] = true;
    actions.push_back(policy[state]);
    out.schedule.push_back(costs_[policy[state]]);
    const auto nx = next(state, policy[state]);
    if (!nx) {
      out.reaches_target = true;
      break;
    }
    state = *nx;
    out.states.push_back(wealth_[state]);
  }
  out.loss = out.reaches_target ? loss_along(start, actions) : value[start];
  return out;
}

double DiscretizedSubsidyProblem::evaluate_constant(double mu0, std::size_t action, bool* reached,
                                                    std::size_t max_steps) const {
  if (action >= costs_.size()) throw DomainError("dp: action index out of range");
  if (reached) *reached = true;
  if (mu0 >= z2_ - kCrossingTol) return 0.0;
  std::size_t state = snap(mu0);
  double loss = 0.0;
  double disc = 1.0;
  for (std::size_t t = 0; t < max_steps; ++t) {
    loss += lambda_ * disc * costs_[action];
    const auto nx = next(state, action);
    if (!nx) return loss;
    disc *= rho_;
    loss += (1.0 - lambda_) * disc * (z2_ - wealth_[*nx]);
    state = *nx;
  }
  if (reached) *reached = false;
  return loss;
}

DpResult dp_optimal_subsidy(const GenericUpdateMap& map, double lambda_weight, double rho, double mu0,
                            std::size_t wealth_grid, std::size_t cost_grid) {
  return DiscretizedSubsidyProblem(map, lambda_weight, rho, wealth_grid, cost_grid).solve(mu0);
}

EquivalenceResult subsidy_form_equivalence(const GenericUpdateMap& map, double cost_c, double x0,
                                           std::size_t steps) {
  if (steps < 1) throw DomainError("subsidy_form_equivalence: steps must be at least 1");
  if (!std::isfinite(cost_c) || !std::isfinite(x0)) {
    throw DomainError("subsidy_form_equivalence: C and x0 must be finite");
  }
  const double z2 = map.z2();
  EquivalenceResult r;
  double u = x0;
  double v = x0 + cost_c;
  auto mark = [&](std::size_t n) {
    if (!r.horizon_u && u >= z2 - kCrossingTol) r.horizon_u = n;
    if (!r.horizon_v && v >= z2 - kCrossingTol) r.horizon_v = n;
  };
  mark(0);
  for (std::size_t n = 1; n <= steps; ++n) {
    u = map(u + cost_c);
    v = map(v) + cost_c;
    r.max_deviation = std::max(r.max_deviation, std::abs((v - u) - cost_c));
    mark(n);
  }
  r.held = r.max_deviation <= 1e-12;
  return r;
}

AffineThresholdSchedule::AffineThresholdSchedule(const GaussianParams& params, double a, double b)
    : model_(params), a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("affine schedule: a and b must be finite");
}

double AffineThresholdSchedule::operator()(double x) const {
  const double target = 1.0 - a_ * x - b_;
  if (!(target > 0.0 && target < 1.0)) {
    throw DomainError("affine schedule: target update a*x + b must lie in (0, 1)");
  }
  return (1.0 - model_.params().alpha) * x + normal_quantile(target) / model_.K();
}

double AffineThresholdSchedule::induced_update(double x) const {
  const double c = (*this)(x);
  return normal_cdf(-model_.K() * (c - (1.0 - model_.params().alpha) * x));
}

}  // namespace dynlab
