#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "dynlab/errors.hpp"
#include "dynlab/interventions.hpp"
#include "test_params.hpp"

using namespace dynlab;
using dynlab::testing::three_fp_example;
using dynlab::testing::kSegmentDelta;

namespace {

GenericUpdateMap segment_map() { return GenericUpdateMap(dynlab::testing::linear_segment_map()); }

// Loss of a constant-C plan written out independently of simulate_subsidy.
double direct_loss(const std::function<double(double)>& f, double z1, double z2, double c, double lambda,
                   double rho, double mu0, std::size_t* horizon) {
  double mu = mu0, loss = 0.0, disc = 1.0;
  for (std::size_t t = 0; t < 1000000; ++t) {
    const bool active = mu >= z1 && mu < z2;
    const double spend = active ? c : 0.0;
    loss += lambda * disc * spend;
    if (t > 0) loss += (1 - lambda) * disc * (z2 - mu);
    mu = f(std::clamp(mu + spend, 0.0, 1.0));
    disc *= rho;
    if (mu >= z2) {
      *horizon = t + 1;
      return loss;
    }
  }
  *horizon = 0;
  return loss;
}

}  // namespace

TEST(GenericUpdateMap, AcceptsThreePointMaps) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  EXPECT_NEAR(g.z2(), 0.61349549301848313408, 1e-12);
  const auto s = segment_map();
  EXPECT_NEAR(s.z1(), 0.2, 1e-12);
  EXPECT_NEAR(s.z2(), 0.6, 1e-12);
  EXPECT_NEAR(s.z3(), 0.9, 1e-12);
}

TEST(GenericUpdateMap, RejectsOtherShapes) {
  EXPECT_THROW(GenericUpdateMap::from_gaussian(dynlab::testing::single_fp_example()), ShapeViolationError);
  // Three crossings with the right signs, but decreasing on (0.25, 0.3).
  const auto dip = dynlab::testing::piecewise_linear(
      {{0.0, 0.05}, {0.2, 0.2}, {0.25, 0.22}, {0.3, 0.2}, {0.55, 0.52}, {0.6, 0.6}, {0.75, 0.85}, {0.9, 0.9}, {1.0, 0.95}});
  EXPECT_THROW(GenericUpdateMap{dip}, ShapeViolationError);
}

TEST(CompareThreshold, EqualThresholdGivesZeroDifferences) {
  const auto c = compare_threshold(three_fp_example(), 0.5);
  ASSERT_TRUE(c.comparable);
  for (double d : c.diffs) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(c.theorem_holds);
}

TEST(CompareThreshold, LoweringThresholdMovesPoints) {
  const auto c = compare_threshold(three_fp_example(), 0.48);
  ASSERT_TRUE(c.comparable);
  EXPECT_GT(c.diffs[0], 0.0);
  EXPECT_LT(c.diffs[1], 0.0);
  EXPECT_GT(c.diffs[2], 0.0);
  EXPECT_TRUE(c.theorem_holds);
}

TEST(CompareThreshold, UpdateDecreasingInThreshold) {
  GaussianParams lower = three_fp_example();
  lower.tau = 0.48;
  const GaussianModel base(three_fp_example()), low(lower);
  for (int i = 0; i <= 100; ++i) EXPECT_GT(low.update(i / 100.0), base.update(i / 100.0));
}

TEST(CompareThreshold, RaisingThresholdRejected) {
  EXPECT_THROW(compare_threshold(three_fp_example(), 0.51), DomainError);
}

TEST(CompareThreshold, LostMultiplicityNotComparable) {
  const auto c = compare_threshold(three_fp_example(), 0.1);
  EXPECT_FALSE(c.comparable);
  EXPECT_FALSE(c.note.empty());
  EXPECT_EQ(c.perturbed.points.size(), 1u);
}

TEST(CompareThreshold, RandomDrawsHaveNoViolations) {
  std::mt19937_64 rng(71);
  int comparable = 0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto p = dynlab::testing::random_three_fp_params(rng);
    const auto c = compare_threshold(p, p.tau - 0.02);
    if (!c.comparable) continue;
    ++comparable;
    EXPECT_TRUE(c.theorem_holds) << draw;
  }
  EXPECT_GT(comparable, 5);
}

TEST(CompareBeta, EqualBetaGivesZeroDifferences) {
  const auto c = compare_beta(three_fp_example(), 0.95);
  ASSERT_TRUE(c.comparable);
  for (double d : c.diffs) EXPECT_EQ(d, 0.0);
}

TEST(CompareBeta, MovingTowardAlpha) {
  const auto c = compare_beta(three_fp_example(), 0.9);
  ASSERT_TRUE(c.comparable);
  EXPECT_GT(c.diffs[0], 0.0);
  EXPECT_LT(c.diffs[2], 0.0);
  EXPECT_TRUE(c.theorem_holds);
}

TEST(CompareBeta, OutsideIntervalRejected) {
  EXPECT_THROW(compare_beta(three_fp_example(), 0.97), DomainError);
  EXPECT_THROW(compare_beta(three_fp_example(), 0.05), DomainError);
  EXPECT_THROW(compare_beta(three_fp_example(), 0.1), DomainError);
}

TEST(CompareBeta, RandomDrawsHaveNoViolations) {
  std::mt19937_64 rng(72);
  int comparable = 0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto p = dynlab::testing::random_three_fp_params(rng);
    const double step = p.beta > p.alpha ? -0.02 : 0.02;
    const auto c = compare_beta(p, p.beta + step);
    if (!c.comparable) continue;
    ++comparable;
    EXPECT_TRUE(c.theorem_holds) << draw;
  }
  EXPECT_GT(comparable, 5);
}

TEST(ComputeDelta, LinearSegmentMap) {
  const auto d = compute_delta(segment_map());
  EXPECT_NEAR(d.delta, kSegmentDelta, 1e-12);
  EXPECT_GE(d.argmax_x, dynlab::testing::kSegmentA - 1e-9);
  EXPECT_LE(d.argmax_x, dynlab::testing::kSegmentB + 1e-9);
}

TEST(ComputeDelta, MatchesDenseScanOnGaussianMap) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  const auto d = compute_delta(g);
  double best = 0.0, best_x = 0.0;
  const int n = 1000000;
  for (int i = 0; i <= n; ++i) {
    const double x = g.z1() + (g.z2() - g.z1()) * i / n;
    if (x - g(x) > best) {
      best = x - g(x);
      best_x = x;
    }
  }
  EXPECT_NEAR(d.delta, best, 1e-11);
  EXPECT_GE(d.delta, best);
  EXPECT_NEAR(d.argmax_x, best_x, 1e-5);
  EXPECT_GT(d.argmax_x, g.z1());
  EXPECT_LT(d.argmax_x, g.z2());
  EXPECT_LT(d.delta, g.z2() - g.z1());
}

TEST(ComputeDelta, BelowGapOnRandomMaps) {
  std::mt19937_64 rng(73);
  for (int draw = 0; draw < 20; ++draw) {
    const auto p = dynlab::testing::random_three_fp_params(rng);
    const auto r = find_fixed_points(p);
    if (r.points.size() != 3) continue;
    const auto g = GenericUpdateMap::from_gaussian(p);
    const auto d = compute_delta(g);
    EXPECT_GT(d.delta, 0.0);
    EXPECT_LT(d.delta, g.z2() - g.z1());
  }
}

TEST(SimulateSubsidy, OneShotPlan) {
  const auto g = segment_map();
  const double mu0 = 0.3, lambda = 0.4;
  const auto plan = simulate_subsidy(g, g.z2() - mu0, lambda, 0.9, mu0);
  EXPECT_TRUE(plan.reachable);
  EXPECT_EQ(plan.horizon_T, 1u);
  EXPECT_DOUBLE_EQ(plan.loss, lambda * (g.z2() - mu0));
  EXPECT_EQ(plan.loss_distance_part, 0.0);
}

TEST(SimulateSubsidy, MatchesDirectComputation) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  const double delta = compute_delta(g).delta;
  for (double c : {delta + 0.001, delta + 0.02, 0.3}) {
    const auto plan = simulate_subsidy(g, c, 0.6, 0.8, g.z1() + 0.01);
    std::size_t horizon = 0;
    const double loss = direct_loss(g.map().eval, g.z1(), g.z2(), c, 0.6, 0.8, g.z1() + 0.01, &horizon);
    EXPECT_EQ(plan.horizon_T, horizon);
    EXPECT_NEAR(plan.loss, loss, 1e-12);
    EXPECT_EQ(plan.loss, plan.loss_cost_part + plan.loss_distance_part);
  }
}

TEST(SimulateSubsidy, StatesFollowSubsidisedMap) {
  const auto g = segment_map();
  const auto plan = simulate_subsidy(g, 0.05, 0.5, 0.9, 0.3);
  for (std::size_t t = 0; t + 1 < plan.states.size(); ++t) {
    EXPECT_EQ(plan.states[t + 1], g(std::clamp(plan.states[t] + 0.05, 0.0, 1.0)));
  }
  EXPECT_GE(plan.states.back(), g.z2());
}

TEST(SimulateSubsidy, BelowDeltaLeavesStartsUnreachable) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  const auto d = compute_delta(g);
  for (double c : {d.delta - 1e-4, d.delta}) {
    const auto plan = simulate_subsidy(g, c, 0.5, 0.9, d.argmax_x - c, 100000);
    EXPECT_FALSE(plan.reachable);
    EXPECT_EQ(plan.horizon_T, 100000u);
  }
}

TEST(SimulateSubsidy, AboveDeltaHorizonBound) {
  std::mt19937_64 rng(74);
  for (int draw = 0; draw < 10; ++draw) {
    const auto p = dynlab::testing::random_three_fp_params(rng);
    if (find_fixed_points(p).points.size() != 3) continue;
    const auto g = GenericUpdateMap::from_gaussian(p);
    const double delta = compute_delta(g).delta;
    for (double eps : {1e-3, 1e-2}) {
      for (int i = 0; i < 20; ++i) {
        const double mu0 = g.z1() + (g.z2() - g.z1()) * i / 20.0;
        const auto plan = simulate_subsidy(g, delta + eps, 0.5, 0.9, mu0);
        ASSERT_TRUE(plan.reachable);
        EXPECT_LE(plan.horizon_T, static_cast<std::size_t>(std::ceil((g.z2() - mu0) / eps)));
      }
    }
  }
}

TEST(SimulateSubsidy, InvalidInputsRejected) {
  const auto g = segment_map();
  EXPECT_THROW(simulate_subsidy(g, 0.1, 0.5, 0.9, 0.1), DomainError);
  EXPECT_THROW(simulate_subsidy(g, 0.1, 0.5, 0.9, 0.6), DomainError);
  EXPECT_THROW(simulate_subsidy(g, -0.1, 0.5, 0.9, 0.3), DomainError);
  EXPECT_THROW(simulate_subsidy(g, 0.1, 1.0, 0.9, 0.3), DomainError);
  EXPECT_THROW(simulate_subsidy(g, 0.1, 0.5, 1.0, 0.3), DomainError);
}

TEST(CostGrid, LogSpacedUpToGap) {
  const auto grid = subsidy_cost_grid(0.03, 0.4);
  ASSERT_EQ(grid.size(), 64u);
  EXPECT_NEAR(grid.front(), 0.03 + 0.37e-4, 1e-15);
  EXPECT_EQ(grid.back(), 0.4);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
  EXPECT_EQ(subsidy_cost_grid(0.05, 0.04), std::vector<double>{0.04});
}

TEST(OneShot, DominatesWhenRhoAtLeastLambda) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  const auto v = check_one_shot_optimality(g, 0.5, 0.9, g.z1() + 0.05);
  EXPECT_EQ(v.precondition, "rho>=lambda");
  EXPECT_TRUE(v.one_shot_best_on_grid);
  for (const auto& e : v.grid) {
    if (e.reachable) {
      EXPECT_LE(v.one_shot_loss, e.loss + 1e-10);
    }
  }
}

TEST(OneShot, RandomPairsWithRhoAtLeastLambda) {
  std::mt19937_64 rng(75);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = segment_map();
  for (int draw = 0; draw < 10; ++draw) {
    const double lambda = 0.95 * u(rng);
    const double rho = lambda + (0.99 - lambda) * u(rng);
    const auto v = check_one_shot_optimality(g, lambda, rho, 0.2 + 0.39 * u(rng));
    EXPECT_TRUE(v.one_shot_best_on_grid) << lambda << " " << rho;
  }
}

TEST(OneShot, MinimalCostWinsWhenRhoSmall) {
  const auto g = segment_map();
  const auto v = check_one_shot_optimality(g, 0.9, 0.01, 0.221);
  EXPECT_NEAR(v.candidate_c, kSegmentDelta + 1e-4, 1e-12);
  EXPECT_TRUE(v.candidate_condition);
  EXPECT_EQ(v.precondition, "candidate");
  EXPECT_TRUE(v.candidate_beats_one_shot);
  EXPECT_LT(v.candidate_plan.loss, v.one_shot_loss);
}

TEST(OneShot, LinearSegmentBoundIsTight) {
  const auto g = segment_map();
  for (double rho : {0.5, 0.9}) {
    for (double lambda : {0.6, 0.95}) {
      const double mu0 = 0.26;
      const auto plan = simulate_subsidy(g, kSegmentDelta + 1e-4, lambda, rho, mu0);
      const double bound =
          lambda * kSegmentDelta / (1 - rho) + rho * (1 - lambda) * (g.z2() - mu0) / (1 - rho);
      EXPECT_NEAR(plan.loss / bound, 1.0, 0.01) << rho << " " << lambda;
    }
  }
}

TEST(OneShot, NecessaryConditionBoundHolds) {
  // When the candidate condition holds the candidate loss sits below the
  // bound lambda C/(1 - rho) + (1 - lambda) rho (z2 - mu0)/(1 - rho).
  const auto g = segment_map();
  const auto v = check_one_shot_optimality(g, 0.9, 0.2, 0.3, 0.05);
  ASSERT_TRUE(v.candidate_condition);
  const double bound = 0.9 * 0.05 / 0.8 + 0.1 * 0.2 * (g.z2() - 0.3) / 0.8;
  EXPECT_LE(v.candidate_plan.loss, bound + 1e-12);
  EXPECT_LT(v.candidate_plan.loss, v.one_shot_loss);
}

namespace {

// Brute force over every action sequence of length <= depth on the grid
// dynamics, with transitions recomputed from the map.
struct Brute {
  std::vector<double> wealth, costs;
  std::function<double(double)> f;
  double z2, lambda, rho;
  int depth;
  double best = std::numeric_limits<double>::infinity();

  std::optional<std::size_t> step(std::size_t i, std::size_t j) const {
    const double y = f(std::clamp(wealth[i] + costs[j], 0.0, 1.0));
    if (y >= z2 - 1e-12) return std::nullopt;
    std::size_t k = 0;
    while (k + 1 < wealth.size() && wealth[k + 1] <= y) ++k;
    return k;
  }
  void search(std::size_t state, int level, double loss, double disc) {
    if (level == depth) return;
    for (std::size_t j = 0; j < costs.size(); ++j) {
      const double spend = loss + lambda * disc * costs[j];
      const auto nx = step(state, j);
      if (!nx) {
        best = std::min(best, spend);
        continue;
      }
      search(*nx, level + 1, spend + (1 - lambda) * disc * rho * (z2 - wealth[*nx]), disc * rho);
    }
  }
};

void check_against_enumeration(const GenericUpdateMap& g, double lambda, double rho, double mu0) {
  const DiscretizedSubsidyProblem prob(g, lambda, rho, 5, 5);
  const auto dp = prob.solve(mu0);

  const double delta = compute_delta(g).delta;
  Brute b;
  const double lo = g.z1() - delta, hi = g.z2() + delta, h = (hi - lo) / 4;
  for (int i = 0; i < 5; ++i) b.wealth.push_back(i == 4 ? hi : lo + h * i);
  const double c_max = g.z2() - g.z1() + delta + h;
  for (int j = 0; j < 5; ++j) b.costs.push_back(c_max * j / 4);
  b.f = g.map().eval;
  b.z2 = g.z2();
  b.lambda = lambda;
  b.rho = rho;
  b.depth = 5;
  std::size_t start = 0;
  while (start + 1 < 5 && b.wealth[start + 1] <= mu0) ++start;
  b.search(start, 0, 0.0, 1.0);
  if (dp.reaches_target) {
    EXPECT_NEAR(dp.loss, b.best, 1e-12) << lambda << " " << rho << " " << mu0;
  } else {
    // Staying below the target forever beats every crossing plan.
    EXPECT_LE(dp.loss, b.best + 1e-12) << lambda << " " << rho << " " << mu0;
  }
}

}  // namespace

TEST(Dp, MatchesExhaustiveEnumeration) {
  const auto seg = segment_map();
  const auto gauss = GenericUpdateMap::from_gaussian(three_fp_example());
  for (double lambda : {0.3, 0.5}) {
    for (double rho : {0.5, 0.8}) {
      for (double mu0 : {0.21, 0.35, 0.5}) check_against_enumeration(seg, lambda, rho, mu0);
      for (double mu0 : {0.01, 0.3, 0.55}) check_against_enumeration(gauss, lambda, rho, mu0);
    }
  }
}

TEST(Dp, PastTargetIsEmpty) {
  const auto g = segment_map();
  const auto dp = dp_optimal_subsidy(g, 0.5, 0.9, 0.7, 20, 20);
  EXPECT_TRUE(dp.schedule.empty());
  EXPECT_EQ(dp.loss, 0.0);
  EXPECT_TRUE(dp.reaches_target);
}

TEST(Dp, SingleJumpWhenRhoAtLeastLambda) {
  const auto g = segment_map();
  for (double mu0 : {0.21, 0.3, 0.45}) {
    const auto dp = dp_optimal_subsidy(g, 0.4, 0.9, mu0, 200, 200);
    ASSERT_TRUE(dp.reaches_target);
    ASSERT_EQ(dp.schedule.size(), 1u);
    EXPECT_GE(g(dp.start_state + dp.schedule[0]), g.z2() - 1e-12);
    EXPECT_LE(dp.schedule[0], g.z2() - dp.start_state + dp.cost_step);
  }
}

TEST(Dp, NoWorseThanConstantPlansOnTheGrid) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  const DiscretizedSubsidyProblem prob(g, 0.7, 0.3, 60, 60);
  for (double mu0 : {0.05, 0.3}) {
    const auto dp = prob.solve(mu0);
    for (std::size_t j = 0; j < prob.costs().size(); ++j) {
      bool reached = false;
      const double loss = prob.evaluate_constant(mu0, j, &reached);
      EXPECT_LE(dp.loss, loss + 1e-12) << j;
    }
  }
}

TEST(Dp, ReportsGridGeometry) {
  const auto g = segment_map();
  const auto dp = dp_optimal_subsidy(g, 0.5, 0.9, 0.3, 41, 11);
  EXPECT_NEAR(dp.wealth_step, (0.4 + 2 * kSegmentDelta) / 40, 1e-9);
  EXPECT_GT(dp.sweeps, 0u);
  EXPECT_GE(dp.snap_error, 0.0);
  EXPECT_LE(dp.snap_error, dp.wealth_step);
  EXPECT_LE(dp.start_state, 0.3);
}

TEST(Dp, InvalidInputsRejected) {
  const auto g = segment_map();
  EXPECT_THROW(dp_optimal_subsidy(g, 0.5, 0.9, 0.3, 1, 10), DomainError);
  EXPECT_THROW(dp_optimal_subsidy(g, 0.5, 1.0, 0.3, 10, 10), DomainError);
  EXPECT_THROW(dp_optimal_subsidy(g, 0.5, 0.9, 0.0, 10, 10), DomainError);
}

TEST(Equivalence, ZeroSubsidyIdentical) {
  const auto r = subsidy_form_equivalence(GenericUpdateMap::from_gaussian(three_fp_example()), 0.0, 0.3, 50);
  EXPECT_TRUE(r.held);
  EXPECT_EQ(r.max_deviation, 0.0);
}

TEST(Equivalence, InvariantAndHorizons) {
  const auto g = GenericUpdateMap::from_gaussian(three_fp_example());
  for (double x0 : {0.0, 0.2, 0.45}) {
    const auto r = subsidy_form_equivalence(g, 0.25, x0, 50);
    EXPECT_TRUE(r.held) << r.max_deviation;
    EXPECT_LE(r.max_deviation, 1e-12);
    ASSERT_TRUE(r.horizon_u.has_value());
    ASSERT_TRUE(r.horizon_v.has_value());
    const auto hu = static_cast<long>(*r.horizon_u), hv = static_cast<long>(*r.horizon_v);
    EXPECT_LE(std::abs(hu - hv), 1);
  }
  EXPECT_THROW(subsidy_form_equivalence(g, 0.1, 0.2, 0), DomainError);
}

TEST(AffineSchedule, ReproducesMapValueAtOnePoint) {
  const GaussianParams p = three_fp_example();
  const GaussianModel m(p);
  const double x0 = 0.4;
  const AffineThresholdSchedule sched(p, 0.0, m.update(x0));
  EXPECT_NEAR(sched(x0), p.tau, 1e-10);
}

TEST(AffineSchedule, InducedUpdateIsAffine) {
  const AffineThresholdSchedule sched(three_fp_example(), 0.6, 0.2);
  for (int i = 0; i < 20; ++i) {
    const double x = i / 19.0;
    EXPECT_NEAR(sched.induced_update(x), 0.6 * x + 0.2, 1e-10);
  }
}

TEST(AffineSchedule, MedianTarget) {
  const AffineThresholdSchedule sched(three_fp_example(), 0.0, 0.5);
  for (double x : {0.0, 0.3, 0.9}) EXPECT_NEAR(sched(x), 0.9 * x, 1e-15);
}

TEST(AffineSchedule, TargetOutsideUnitIntervalRejected) {
  const AffineThresholdSchedule sched(three_fp_example(), 1.0, 0.2);
  EXPECT_THROW(sched(0.9), DomainError);
}
