#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynlab/fixed_points.hpp"
#include "dynlab/gaussian_model.hpp"
#include "dynlab/update_map.hpp"

namespace dynlab {

/// An increasing map with exactly three fixed points z1 < z2 < z3 and the
/// sign pattern f > id on (0, z1) and (z2, z3), f < id on (z1, z2) and (z3, 1).
class GenericUpdateMap {
 public:
  explicit GenericUpdateMap(UpdateMap map);
  static GenericUpdateMap from_gaussian(const GaussianParams& params);

  double operator()(double x) const { return map_.eval(x); }
  const UpdateMap& map() const { return map_; }
  const FixedPointReport& report() const { return report_; }
  double z1() const { return report_.points[0].z; }
  double z2() const { return report_.points[1].z; }
  double z3() const { return report_.points[2].z; }

 private:
  UpdateMap map_;
  FixedPointReport report_;
};

struct Comparison {
  FixedPointReport base;
  FixedPointReport perturbed;
  double base_value = 0.0;       // tau or beta
  double perturbed_value = 0.0;
  bool comparable = false;       // both maps have three fixed points
  std::array<double, 3> diffs{};  // perturbed minus base, per fixed point
  bool theorem_holds = false;    // meaningful only when comparable
  std::string note;
};

/// Lowers the admission threshold to tau_prime <= tau. Expected: z1 and z3
/// rise, z2 falls.
Comparison compare_threshold(const GaussianParams& params, double tau_prime);

/// Moves beta toward alpha. Expected: z1 rises and z3 falls.
Comparison compare_beta(const GaussianParams& params, double beta_prime);

struct DeltaReport {
  double delta;
  double argmax_x;
};

/// Largest per-round loss x - f(x) over [z1, z2].
DeltaReport compute_delta(const GenericUpdateMap& map);

struct SubsidyPlan {
  double cost_c = 0.0;
  double lambda_weight = 0.0;
  double rho = 0.0;
  double mu0 = 0.0;
  double z2 = 0.0;
  std::vector<double> states;
  std::size_t horizon_T = 0;  // first t with states[t] >= z2, or the step cap
  bool reachable = false;
  double loss = 0.0;
  double loss_cost_part = 0.0;
  double loss_distance_part = 0.0;
};

inline constexpr double kCrossingTol = 1e-12;

/// Constant subsidy C applied while mu lies in [z1, z2).
SubsidyPlan simulate_subsidy(const GenericUpdateMap& map, double cost_c, double lambda_weight, double rho,
                             double mu0, std::size_t max_steps = 1000000);

struct GridEntry {
  double cost_c;
  double loss;
  std::size_t horizon_T;
  bool reachable;
};

struct OptimalityVerdict {
  double lambda_weight = 0.0;
  double rho = 0.0;
  double mu0 = 0.0;
  double z2 = 0.0;
  double delta = 0.0;
  double one_shot_cost = 0.0;
  double one_shot_loss = 0.0;
  bool rho_ge_lambda = false;             // one-shot optimality precondition
  double candidate_c = 0.0;
  bool candidate_condition = false;       // rho < lambda (1 - C / (z2 - mu0))
  bool min_cost_condition = false;        // rho < lambda (1 - Delta / (z2 - mu0))
  SubsidyPlan candidate_plan;
  bool candidate_beats_one_shot = false;
  std::vector<GridEntry> grid;
  double best_grid_c = 0.0;
  double best_grid_loss = 0.0;
  bool one_shot_best_on_grid = false;     // within 1e-10
  std::string precondition;               // "rho>=lambda", "candidate", "neither"
};

/// C_i = Delta + (z2 - mu0 - Delta) * 10^(-4 (63 - i)/63), i = 0..63, so the
/// last entry is the one-shot cost. Collapses to the one-shot when
/// z2 - mu0 <= Delta.
std::vector<double> subsidy_cost_grid(double delta, double gap);

/// Compares the one-shot plan against the C-grid and a candidate cost
/// (default Delta + 1e-4, capped at the one-shot cost).
OptimalityVerdict check_one_shot_optimality(const GenericUpdateMap& map, double lambda_weight, double rho,
                                            double mu0, std::optional<double> candidate_c = std::nullopt);

struct DpResult {
  std::vector<double> schedule;   // per-step cost until the target is crossed
  std::vector<double> states;     // grid states visited, starting at snapped mu0
  double loss = 0.0;
  bool reaches_target = false;    // false when the optimal policy never crosses z2
  double start_state = 0.0;
  double wealth_step = 0.0;
  double cost_step = 0.0;
  double snap_error = 0.0;        // largest gap between an image and its snapped state
  std::size_t sweeps = 0;
};

/// Value iteration over a wealth grid on [z1 - Delta, z2 + Delta] and a cost
/// grid on [0, z2 - z1 + Delta + h]. Images at or above z2 end the episode;
/// other images snap down to the nearest grid state at or below them.
class DiscretizedSubsidyProblem {
 public:
  DiscretizedSubsidyProblem(const GenericUpdateMap& map, double lambda_weight, double rho,
                            std::size_t wealth_grid, std::size_t cost_grid);

  const std::vector<double>& wealth() const { return wealth_; }
  const std::vector<double>& costs() const { return costs_; }
  double z2() const { return z2_; }
  double lambda_weight() const { return lambda_; }
  double rho() const { return rho_; }

  /// Next state index for (state, action), or nullopt when the image crosses z2.
  std::optional<std::size_t> next(std::size_t state, std::size_t action) const;
  bool is_target(std::size_t state) const { return wealth_[state] >= z2_ - kCrossingTol; }
  std::size_t snap(double mu) const;

  DpResult solve(double mu0) const;

  /// Loss of the constant action j from mu0 on the grid dynamics, truncated
  /// after max_steps. reached reports whether the target was crossed.
  double evaluate_constant(double mu0, std::size_t action, bool* reached = nullptr,
                           std::size_t max_steps = 100000) const;

 private:
  double loss_along(std::size_t start, const std::vector<std::size_t>& actions) const;

  double lambda_;
  double rho_;
  double z2_;
  std::vector<double> wealth_;
  std::vector<double> costs_;
  std::vector<std::optional<std::size_t>> next_;  // state-major
  double snap_error_ = 0.0;
};

DpResult dp_optimal_subsidy(const GenericUpdateMap& map, double lambda_weight, double rho, double mu0,
                            std::size_t wealth_grid, std::size_t cost_grid);

struct EquivalenceResult {
  bool held = false;
  double max_deviation = 0.0;
  std::optional<std::size_t> horizon_u;  // first n with u_n >= z2
  std::optional<std::size_t> horizon_v;
};

/// Runs u_{n+1} = f(u_n + C) from x0 and v_{n+1} = f(v_n) + C from x0 + C and
/// checks v_n - u_n = C to 1e-12.
EquivalenceResult subsidy_form_equivalence(const GenericUpdateMap& map, double cost_c, double x0,
                                           std::size_t steps);

/// Wealth-dependent threshold C(x) = (1 - alpha) x + Phi^{-1}(1 - a x - b)/K
/// whose induced update is a x + b.
class AffineThresholdSchedule {
 public:
  AffineThresholdSchedule(const GaussianParams& params, double a, double b);

  double operator()(double x) const;
  double induced_update(double x) const;

 private:
  GaussianModel model_;
  double a_;
  double b_;
};

}  // namespace dynlab
