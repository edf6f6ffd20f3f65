#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qpd/equilibrium.hpp"
#include "test_support.hpp"

namespace qpd {
namespace {

using testing::fig2_table;
using testing::fig3_table;
using testing::fig4_table;
using testing::make_rng;
using testing::random_gamma;
using testing::random_strategy;
using testing::random_table;
using testing::random_unit_interval;

constexpr double kPi = std::numbers::pi;

Entanglement at(double g) { return Entanglement::make(g); }

TEST(BestResponse, AgainstDefectAndQuantum) {
  const auto table = fig2_table();
  struct Case {
    double gamma;
    StrategyVec3 against;
    StrategyVec3 best;
    double payoff;
  };
  const Case cases[] = {
      {0.0, defect<3>(), defect<3>(), 1.0},
      {kPi / 2, defect<3>(), quantum<3>(), 5.0},
      {0.0, quantum<3>(), defect<3>(), 5.0},
      {kPi / 2, quantum<3>(), quantum<3>(), 3.0},
  };
  for (const auto& c : cases) {
    const auto br = best_response(build_tensor_twoparam(table, at(c.gamma)), c.against);
    EXPECT_EQ(br.strategy(), c.best) << "gamma " << c.gamma;
    EXPECT_NEAR(br.payoff(), c.payoff, 1e-12);
    EXPECT_FALSE(br.degenerate());
  }
}

TEST(BestResponse, DegenerateAtThreshold) {
  const auto table = fig2_table();
  const double th1 = std::asin(std::sqrt(0.2));
  const auto br = best_response(build_tensor_twoparam(table, at(th1)), defect<3>());
  EXPECT_TRUE(br.degenerate());
  EXPECT_EQ(br.eigenspace.size(), 2u);
  EXPECT_NEAR(br.payoff(), 1.0, 1e-12);
}

TEST(BestResponse, CooperateIsExploitedClassically) {
  const auto br = best_response(build_tensor_full(fig2_table(), at(0.0)), cooperate<4>());
  EXPECT_EQ(br.strategy(), defect<4>());
  EXPECT_DOUBLE_EQ(br.payoff(), 5.0);
}

TEST(IsNash, Examples) {
  const auto table = fig2_table();
  const auto t0 = build_tensor_twoparam(table, at(0.0));
  const auto t1 = build_tensor_twoparam(table, at(kPi / 2));
  EXPECT_TRUE(is_nash(t0, defect<3>(), defect<3>()));
  EXPECT_FALSE(is_nash(t0, cooperate<3>(), cooperate<3>()));
  EXPECT_TRUE(is_nash(t1, quantum<3>(), quantum<3>()));
  EXPECT_FALSE(is_nash(t1, defect<3>(), defect<3>()));
  EXPECT_THROW(is_nash(t0, defect<3>(), defect<3>(), 0.0), DomainError);
  EXPECT_THROW(is_nash(t0, defect<3>(), defect<3>(), -1.0), DomainError);
  const auto regret = nash_regret(t0, cooperate<3>(), cooperate<3>());
  EXPECT_NEAR(regret.a, 2.0, 1e-12);  // t - r
  EXPECT_NEAR(regret.b, 2.0, 1e-12);
}

TEST(Thresholds, Examples) {
  const auto f2 = thresholds(fig2_table());
  EXPECT_NEAR(f2.gamma_th1, 0.463647609000806, 1e-12);
  EXPECT_NEAR(f2.gamma_th2, 0.684719203002283, 1e-12);
  EXPECT_NEAR(f2.gamma_b, 0.615479708670387, 1e-12);
  const auto f3 = thresholds(fig3_table());
  EXPECT_NEAR(f3.gamma_th1, 0.684719203002283, 1e-12);
  EXPECT_NEAR(f3.gamma_th2, 0.684719203002283, 1e-12);
  const auto f4 = thresholds(fig4_table());
  EXPECT_NEAR(f4.gamma_th1, kPi / 4, 1e-12);
  EXPECT_NEAR(f4.gamma_th2, kPi / 6, 1e-12);
  EXPECT_NEAR(f4.gamma_b, std::asin(std::sqrt(2.0 / 3.0)), 1e-12);
}

TEST(Thresholds, RegimeNames) {
  EXPECT_EQ(regime(fig2_table()), Regime::kBelow);
  EXPECT_EQ(regime(fig3_table()), Regime::kEqual);
  EXPECT_EQ(regime(fig4_table()), Regime::kAbove);
  EXPECT_EQ(to_string(Regime::kBelow), "r+p<t+s");
}

TEST(ClassifyTwoParam, TransitionalLayout) {
  const auto table = fig2_table();
  auto rep = classify_region_twoparam(table, at(0.3));
  EXPECT_EQ(rep.region, Region::kClassical);
  ASSERT_EQ(rep.equilibria.size(), 1u);
  EXPECT_EQ(rep.equilibria[0].strategy_a, defect<3>());
  EXPECT_NEAR(rep.equilibria[0].payoff.payoff_a, 1.0, 1e-12);

  rep = classify_region_twoparam(table, at(0.55));
  EXPECT_EQ(rep.region, Region::kTransitional);
  ASSERT_EQ(rep.equilibria.size(), 2u);
  const double c2 = std::pow(std::cos(0.55), 2), s2 = std::pow(std::sin(0.55), 2);
  EXPECT_EQ(rep.equilibria[0].strategy_a, defect<3>());
  EXPECT_EQ(rep.equilibria[0].strategy_b, quantum<3>());
  EXPECT_NEAR(rep.equilibria[0].payoff.payoff_a, 5 * c2, 1e-12);
  EXPECT_NEAR(rep.equilibria[0].payoff.payoff_b, 5 * s2, 1e-12);
  EXPECT_NEAR(rep.equilibria[1].payoff.payoff_a, 5 * s2, 1e-12);

  rep = classify_region_twoparam(table, at(1.0));
  EXPECT_EQ(rep.region, Region::kQuantum);
  ASSERT_EQ(rep.equilibria.size(), 1u);
  EXPECT_NEAR(rep.equilibria[0].payoff.payoff_a, 3.0, 1e-12);
  for (const auto& eq : rep.equilibria) EXPECT_TRUE(eq.verified);
}

TEST(ClassifyTwoParam, CoexistentLayout) {
  const auto rep = classify_region_twoparam(fig4_table(), at(0.6));
  EXPECT_EQ(rep.region, Region::kCoexistent);
  ASSERT_EQ(rep.equilibria.size(), 2u);
  EXPECT_EQ(rep.equilibria[0].strategy_a, defect<3>());
  EXPECT_EQ(rep.equilibria[1].strategy_a, quantum<3>());
  EXPECT_NEAR(rep.equilibria[0].payoff.payoff_a, 2.0, 1e-12);
  EXPECT_NEAR(rep.equilibria[1].payoff.payoff_a, 3.0, 1e-12);
}

TEST(ClassifyTwoParam, BoundariesBelongToBothSides) {
  const auto f2 = thresholds(fig2_table());
  auto rep = classify_region_twoparam(fig2_table(), at(f2.gamma_th1));
  EXPECT_EQ(rep.region, Region::kTransitional);
  ASSERT_TRUE(rep.boundary_with);
  EXPECT_EQ(*rep.boundary_with, Region::kClassical);
  EXPECT_EQ(rep.equilibria.size(), 3u);  // D x D, D x Q, Q x D

  const auto f3 = thresholds(fig3_table());
  rep = classify_region_twoparam(fig3_table(), at(f3.gamma_th1));
  EXPECT_EQ(rep.region, Region::kQuantum);
  ASSERT_TRUE(rep.boundary_with);
  EXPECT_EQ(*rep.boundary_with, Region::kClassical);
  EXPECT_EQ(rep.equilibria.size(), 4u);
}

TEST(ClassifyFull, FamilyBelowBoundary) {
  const auto rep = classify_region_full(fig2_table(), at(0.3));
  EXPECT_EQ(rep.region, Region::kInfiniteFamily);
  ASSERT_TRUE(rep.family_payoff);
  const double want = 1 + 2 * std::pow(std::sin(0.3), 2);
  EXPECT_NEAR(*rep.family_payoff, want, 1e-12);
  ASSERT_EQ(rep.equilibria.size(), kFamilySampleAlphas.size());
  for (const auto& eq : rep.equilibria) {
    EXPECT_TRUE(eq.verified);
    EXPECT_NEAR(eq.payoff.payoff_a, want, 1e-12);
    EXPECT_NEAR(eq.payoff.payoff_b, want, 1e-12);
  }
}

TEST(ClassifyFull, NoPureEquilibriumAboveBoundary) {
  const auto rep = classify_region_full(fig2_table(), at(1.0));
  EXPECT_EQ(rep.region, Region::kNoPureNE);
  EXPECT_TRUE(rep.equilibria.empty());
  EXPECT_FALSE(rep.family);

  const double gb = thresholds(fig2_table()).gamma_b;
  const auto edge = classify_region_full(fig2_table(), at(gb));
  EXPECT_EQ(edge.region, Region::kInfiniteFamily);
  ASSERT_TRUE(edge.boundary_with);
  EXPECT_EQ(*edge.boundary_with, Region::kNoPureNE);
}

TEST(DominanceCycle, ClosesAboveBoundary) {
  const double g = 1.0, e = std::pow(std::sin(g), 2);
  const auto tensor = build_tensor_full(fig2_table(), at(g));
  const auto cycle = dominance_cycle(tensor, 0.6);
  EXPECT_LT(cycle.residual, 1e-9);
  EXPECT_LT(max_abs_diff(cycle.members[1].components(), {0.6, 0, 0, -0.8}), 1e-12);
  EXPECT_LT(max_abs_diff(cycle.members[2].components(), {0, 0.8, -0.6, 0}), 1e-12);
  EXPECT_LT(max_abs_diff(cycle.members[3].components(), {0.8, 0, 0, 0.6}), 1e-12);
  EXPECT_NEAR(cycle.response_payoffs[0], 5 * e, 1e-12);
  EXPECT_NEAR(cycle.response_payoffs[1], 5.0, 1e-12);
  EXPECT_NEAR(cycle.response_payoffs[2], 5 * e, 1e-12);
  EXPECT_NEAR(cycle.response_payoffs[3], 5.0, 1e-12);

  EXPECT_LT(dominance_cycle(tensor, 1.0).residual, 1e-9);
  EXPECT_LT(dominance_cycle(tensor, 0.0).residual, 1e-9);
}

TEST(DominanceCycle, DomainChecks) {
  EXPECT_THROW(dominance_cycle(build_tensor_full(fig2_table(), at(0.3)), 0.5), DomainError);
  EXPECT_THROW(dominance_cycle(build_tensor_full(fig2_table(), at(1.0)), 1.5), DomainError);
}

TEST(EquilibriumProperty, RayleighBound) {
  auto rng = make_rng(51);
  for (int n = 0; n < 300; ++n) {
    const auto tensor = build_tensor_full(random_table(rng), random_gamma(rng));
    const auto u = random_strategy<4>(rng);
    const auto br = best_response(tensor, u);
    const auto p = response_matrix(tensor, u);
    ASSERT_NEAR(p.payoff(br.strategy()), br.payoff(), 1e-10);
    for (int k = 0; k < 20; ++k) ASSERT_LE(p.payoff(random_strategy<4>(rng)), br.payoff() + 1e-12);
  }
}

TEST(EquilibriumProperty, ArgmaxFlipsAcrossFirstThreshold) {
  auto rng = make_rng(52);
  for (int n = 0; n < 200; ++n) {
    const auto table = random_table(rng);
    const double th1 = thresholds(table).gamma_th1;
    const auto below = best_response(build_tensor_twoparam(table, at(th1 - 1e-6)), defect<3>());
    const auto above = best_response(build_tensor_twoparam(table, at(th1 + 1e-6)), defect<3>());
    ASSERT_EQ(below.strategy(), defect<3>());
    ASSERT_EQ(above.strategy(), quantum<3>());
    const auto on = response_matrix(build_tensor_twoparam(table, at(th1)), defect<3>());
    ASSERT_LT(std::abs(on(1, 1) - on(2, 2)), 1e-5);
  }
}

TEST(EquilibriumProperty, PayoffJumpsAcrossSingleThreshold) {
  const double th = thresholds(fig3_table()).gamma_th1;
  const auto before = classify_region_twoparam(fig3_table(), at(th - 1e-9));
  const auto after = classify_region_twoparam(fig3_table(), at(th + 1e-9));
  ASSERT_EQ(before.equilibria.size(), 1u);
  ASSERT_EQ(after.equilibria.size(), 1u);
  EXPECT_NEAR(before.equilibria[0].payoff.payoff_a, 2.0, 1e-9);
  EXPECT_NEAR(after.equilibria[0].payoff.payoff_a, 3.0, 1e-9);
}

TEST(EquilibriumProperty, ClassifiedProfilesAreNash) {
  auto rng = make_rng(53);
  for (int n = 0; n < 200; ++n) {
    const auto table = random_table(rng);
    const auto g = random_gamma(rng);
    const auto two = build_tensor_twoparam(table, g);
    for (const auto& eq : classify_region_twoparam(table, g).equilibria)
      ASSERT_TRUE(is_nash(two, eq.strategy_a, eq.strategy_b));
    const auto full = build_tensor_full(table, g);
    for (const auto& eq : classify_region_full(table, g).equilibria)
      ASSERT_TRUE(is_nash(full, eq.strategy_a, eq.strategy_b));
  }
}

TEST(EquilibriumProperty, ThresholdOrderFollowsRegime) {
  auto rng = make_rng(54);
  for (int n = 0; n < 500; ++n) {
    const auto table = random_table(rng);
    const auto th = thresholds(table);
    ASSERT_GT(th.gamma_th1, 0.0);
    ASSERT_LT(th.gamma_th1, kPi / 2);
    ASSERT_GT(th.gamma_th2, 0.0);
    ASSERT_LT(th.gamma_th2, kPi / 2);
    ASSERT_EQ(th.gamma_th1 < th.gamma_th2, regime(table) == Regime::kBelow);
  }
}

TEST(EquilibriumProperty, FamilyBreaksAboveBoundary) {
  auto rng = make_rng(55);
  for (int n = 0; n < 100; ++n) {
    const auto table = random_table(rng);
    const double gb = thresholds(table).gamma_b;
    const double a = random_unit_interval(rng), b = std::sqrt(1 - a * a);
    const auto ua = StrategyVec4::normalized({0, a, b, 0});
    const auto ub = StrategyVec4::normalized({0, b, a, 0});
    const double below = gb * random_unit_interval(rng);
    const double above = gb + (kPi / 2 - gb) * (0.05 + 0.95 * random_unit_interval(rng));
    ASSERT_TRUE(is_nash(build_tensor_full(table, at(below)), ua, ub));
    ASSERT_FALSE(is_nash(build_tensor_full(table, at(above)), ua, ub));
  }
}

}  // namespace
}  // namespace qpd
