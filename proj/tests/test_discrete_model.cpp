#include <gtest/gtest.h>

#include <random>

#include "dynlab/discrete_model.hpp"
#include "dynlab/errors.hpp"

using namespace dynlab;

namespace {
DiscreteParams canonical(double p, double beta) {
  DiscreteParams d;
  d.p = p;
  d.beta_thr = beta;
  return d;
}
}  // namespace

TEST(LambdaStar, TypeOnlyValues) {
  EXPECT_DOUBLE_EQ(lambda_star(0.5, 0.5, DiscreteCase::type_only), 0.5);
  EXPECT_DOUBLE_EQ(lambda_star(0.5, 0.0, DiscreteCase::type_only), 1.0);
  EXPECT_NEAR(lambda_star(0.5, 0.8, DiscreteCase::type_only), 0.2, 1e-15);
}

TEST(LambdaStar, WealthOnlyValues) {
  EXPECT_DOUBLE_EQ(lambda_star(0.5, 0.5, DiscreteCase::wealth_only), 0.5);
  const double p = 0.3, b = 0.6;
  EXPECT_NEAR(lambda_star(p, b, DiscreteCase::wealth_only), p * b / (1 - (p + b - 2 * b * p)), 1e-15);
}

TEST(LambdaStar, InUnitIntervalForInteriorInputs) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng), b = u(rng);
    for (auto c : {DiscreteCase::type_only, DiscreteCase::wealth_only}) {
      const double l = lambda_star(p, b, c);
      EXPECT_GE(l, 0.0);
      EXPECT_LE(l, 1.0);
    }
  }
}

TEST(LambdaStar, DegenerateDenominators) {
  EXPECT_THROW(lambda_star(0.0, 0.0, DiscreteCase::type_only), DomainError);
  EXPECT_THROW(lambda_star(1.0, 0.0, DiscreteCase::wealth_only), DomainError);
  EXPECT_THROW(lambda_star(0.5, 0.5, DiscreteCase::mixed), DomainError);
  EXPECT_THROW(lambda_star(1.5, 0.5, DiscreteCase::type_only), DomainError);
}

TEST(Case3, ZeroRightHandSideWhenAlphaEqualsBeta) {
  for (double lambda : {0.0, 0.3, 1.0}) {
    const double a = 0.4, p = 0.3;
    EXPECT_EQ(accept_condition_case3(p, a, a, lambda), lambda * (1 - (a + p + a - 2 * a * p)) >= 0.0);
  }
}

TEST(Case3, ReducesToCornerCases) {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> l(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double p = u(rng), b = u(rng), lambda = l(rng);
    EXPECT_EQ(accept_condition_case3(p, b, 1.0, lambda), lambda <= lambda_star(p, b, DiscreteCase::type_only));
    EXPECT_EQ(accept_condition_case3(p, b, 0.0, lambda), lambda >= lambda_star(p, b, DiscreteCase::wealth_only));
  }
}

TEST(DiscreteUpdate, SpecialisedBranches) {
  const auto d = canonical(0.5, 0.5);
  EXPECT_NEAR(discrete_update(d, 0.3, DiscreteCase::type_only), 0.65, 1e-15);
  EXPECT_NEAR(discrete_update(d, 0.3, DiscreteCase::wealth_only), 0.15, 1e-15);
  EXPECT_NEAR(discrete_update(d, 0.7, DiscreteCase::type_only), 0.35, 1e-15);
  EXPECT_NEAR(discrete_update(d, 0.7, DiscreteCase::wealth_only), 0.85, 1e-15);
}

TEST(DiscreteUpdate, TieUsesAcceptingBranch) {
  const auto d = canonical(0.5, 0.5);
  EXPECT_NEAR(discrete_update(d, 0.5, DiscreteCase::type_only), 0.75, 1e-15);
  EXPECT_NEAR(discrete_update(d, 0.5, DiscreteCase::wealth_only), 0.75, 1e-15);
}

TEST(DiscreteUpdate, EveryoneTalentedStaysWealthy) {
  EXPECT_EQ(discrete_update(canonical(1.0, 0.5), 1.0, DiscreteCase::type_only), 1.0);
}

TEST(DiscreteUpdate, GeneralMatrixMatchesBranchFormulas) {
  DiscreteParams d{0.4, 0.3, 0.6, {{{0.1, 0.7}, {0.2, 0.9}}}};
  const double lambda = 0.25;
  const double accepted = 0.9 * lambda + 0.7 * (1 - lambda) * 0.4 + 0.1 * (1 - lambda) * 0.6;
  const double rejected = 0.9 * lambda * 0.4 + 0.2 * lambda * 0.6 + 0.1 * (1 - lambda);
  const bool acc = accept_condition_case3(0.4, 0.3, 0.6, lambda);
  EXPECT_NEAR(discrete_update(d, lambda, DiscreteCase::mixed), acc ? accepted : rejected, 1e-15);
}

TEST(DiscreteUpdate, StaysInUnitInterval) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    DiscreteParams d{u(rng), u(rng), u(rng), {{{u(rng), u(rng)}, {u(rng), u(rng)}}}};
    for (auto c : {DiscreteCase::type_only, DiscreteCase::wealth_only, DiscreteCase::mixed}) {
      double v;
      try {
        v = discrete_update(d, u(rng), c);
      } catch (const DomainError&) {
        continue;
      }
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(DiscreteUpdate, InvalidInputsRejected) {
  auto d = canonical(0.5, 0.5);
  EXPECT_THROW(discrete_update(d, 1.5, DiscreteCase::type_only), DomainError);
  d.A[0][1] = 1.2;
  EXPECT_THROW(discrete_update(d, 0.5, DiscreteCase::type_only), DomainError);
}

TEST(DiscreteSimulate, TypeOnlyOscillates) {
  const auto tr = discrete_simulate(canonical(0.5, 0.5), 0.3, DiscreteCase::type_only);
  EXPECT_EQ(tr.terminal, Terminal::cycle);
  EXPECT_EQ(tr.period, 2u);
  ASSERT_EQ(tr.support.size(), 2u);
  const double lo = std::min(tr.support[0], tr.support[1]);
  const double hi = std::max(tr.support[0], tr.support[1]);
  EXPECT_NEAR(lo, 1.0 / 3, 1e-9);
  EXPECT_NEAR(hi, 2.0 / 3, 1e-9);
}

TEST(DiscreteSimulate, TypeOnlyOscillatesFromEveryStart) {
  for (int i = 0; i <= 20; ++i) {
    const auto tr = discrete_simulate(canonical(0.5, 0.5), i / 20.0, DiscreteCase::type_only);
    EXPECT_EQ(tr.terminal, Terminal::cycle) << i;
  }
}

TEST(DiscreteSimulate, WealthOnlyIsBistable) {
  const auto d = canonical(0.5, 0.5);
  const auto low = discrete_simulate(d, 0.3, DiscreteCase::wealth_only);
  const auto high = discrete_simulate(d, 0.6, DiscreteCase::wealth_only);
  EXPECT_EQ(low.terminal, Terminal::converged);
  EXPECT_EQ(high.terminal, Terminal::converged);
  EXPECT_NEAR(low.limit, 0.0, 1e-9);
  EXPECT_NEAR(high.limit, 1.0, 1e-9);
}

TEST(DiscreteSimulate, WealthOnlyBranchesContract) {
  std::mt19937_64 rng(84);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const auto d = canonical(u(rng), u(rng));
    const double ls = lambda_star(d.p, d.beta_thr, DiscreteCase::wealth_only);
    const auto below = discrete_simulate(d, ls * 0.5, DiscreteCase::wealth_only);
    const auto above = discrete_simulate(d, ls + (1 - ls) * 0.5, DiscreteCase::wealth_only);
    // Stopping is on successive differences, so slow contractions end short.
    EXPECT_NEAR(below.limit, 0.0, 1e-6);
    EXPECT_NEAR(above.limit, 1.0, 1e-6);
  }
}
