#include <gtest/gtest.h>

#include "approach/approachability.hpp"
#include "approach/environments.hpp"
#include "approach/errors.hpp"
#include "approach/matrix_game.hpp"
#include "approach/planner.hpp"
#include "approach/rfe_tabular.hpp"
#include "approach/vmg.hpp"
#include "support.hpp"

namespace approach {
namespace {

TabularVMG single_stage(const Eigen::MatrixXd& payoff) {
  const int A = static_cast<int>(payoff.rows()), B = static_cast<int>(payoff.cols());
  Eigen::MatrixXd r(1, A * B);
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) r(0, a * B + b) = payoff(a, b);
  return TabularVMG(TabularVMDP(1, A * B, 1, 1, 0, std::vector<double>(A * B, 1.0), r), A, B);
}

TEST(Vmg, ProductPolicyAndExactValue) {
  const TabularVMG g = random_game(3, 2, 3, 2, 2, 4);
  Rng rng(1);
  const Policy mu = testing::random_policy(2, 3, 2, rng), nu = testing::random_policy(2, 3, 3, rng);
  const Policy joint = product_policy(mu, nu);
  EXPECT_DOUBLE_EQ(joint.prob(1, 2, g.joint_action(1, 2)), mu.prob(1, 2, 1) * nu.prob(1, 2, 2));
  EXPECT_LE((exact_game_value(g, mu, nu) - exact_policy_value(g.joint(), joint)).norm(), 1e-15);
  EXPECT_LE((exact_policy_value(induced_max_player_model(g, mu), nu) - exact_game_value(g, mu, nu)).norm(),
            1e-12);
  EXPECT_LE((exact_policy_value(induced_min_player_model(g, nu), mu) - exact_game_value(g, mu, nu)).norm(),
            1e-12);
}

TEST(Vmg, RejectsMismatchedActionCounts) {
  EXPECT_THROW(TabularVMG(random_dense(1, 4, 1, 1, 1), 3, 2), ConfigError);
}

TEST(Vmg, BestResponseExploitsDominatedPureAction) {
  Eigen::MatrixXd M(2, 2);
  M << 0.2, 0.9, -0.5, 0.4;
  const TabularVMG g = single_stage(M);
  const Policy row0 = Policy::deterministic(1, 1, 2, std::vector<int>{0});
  EXPECT_DOUBLE_EQ(best_response_to_min(g, row0, Eigen::VectorXd::Ones(1)), 0.9);
  const Policy col1 = Policy::deterministic(1, 1, 2, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(best_response_to_max(g, col1, Eigen::VectorXd::Ones(1)), 0.4);
}

TEST(Vmg, SingleStageMatchesMatrixGame) {
  const TabularVMG g = random_game(1, 3, 4, 1, 2, 6);
  const Eigen::Vector2d theta(0.6, -0.3);
  Eigen::MatrixXd M(3, 4);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b) M(a, b) = theta.dot(g.joint().mean_return(0, 0, g.joint_action(a, b)));
  const NashPlan plan = nash_plan(g, theta);
  EXPECT_NEAR(plan.initial_value(), solve_matrix_game(M).value, 1e-12);
  EXPECT_NEAR(best_response_to_min(g, plan.mu, theta), plan.initial_value(), 1e-9);
  EXPECT_NEAR(best_response_to_max(g, plan.nu, theta), plan.initial_value(), 1e-9);
}

TEST(Vmg, ZeroThetaHasZeroValue) {
  const TabularVMG g = random_game(3, 2, 2, 3, 2, 7);
  const NashPlan plan = nash_plan(g, Eigen::Vector2d::Zero());
  for (double v : plan.V) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(plan.max_gap, 0.0);
  EXPECT_THROW(nash_plan(g, Eigen::Vector2d(1, 1)), InputError);
}

TEST(Vmg, OneMaxActionExplorationMatchesSingleAgent) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 7, NoiseLaw{0.5});
  const TabularVMG g(m, 2, 1);
  const std::int64_t K = 2000;
  Rng a(5), b(5);
  const GameExploreResult mg = vi_zero_mg_explore(g, K, make_game_bonus_config(g, K, 0.1), a);
  const ExploreResult sa = vi_zero_explore(m, K, make_bonus_config(2, 3, 2, K, 3, 0.1), b);
  EXPECT_EQ(mg.empirical.joint.transition_counts(), sa.empirical.transition_counts());
  EXPECT_EQ(mg.empirical.joint.return_sums(), sa.empirical.return_sums());
  EXPECT_EQ(mg.empirical.joint.snapshot(), sa.empirical.snapshot());
  ASSERT_EQ(mg.log.size(), sa.log.size());
  for (std::size_t i = 0; i < mg.log.size(); ++i) EXPECT_EQ(mg.log[i].v_tilde, sa.log[i].v_tilde);
}

TEST(Vmg, ExplorationCountsAndCoverage) {
  const TabularVMG g = random_game(3, 2, 2, 3, 2, 7, NoiseLaw{0.5});
  const std::int64_t K = 20000;
  Rng rng(7);
  const GameExploreResult res = vi_zero_mg_explore(g, K, make_game_bonus_config(g, K, 0.1), rng);
  const EmpiricalModel& e = res.empirical.joint;
  for (int h = 0; h < 3; ++h) {
    std::int64_t total = 0;
    for (int s = 0; s < 3; ++s)
      for (int j = 0; j < 4; ++j) total += e.count(h, s, j);
    EXPECT_EQ(total, K);
  }
  const auto occ = exact_occupancy(g.joint(), Policy::uniform(3, 3, 4));
  for (int i = 0; i < g.joint().num_sa(); ++i)
    if (occ[i] >= 0.05) EXPECT_GE(e.counts()[i], 50) << "pair " << i;
}

TEST(Vmg, PlannedStrategiesAreNearlyUnexploitable) {
  const TabularVMG g = random_game(3, 2, 2, 3, 2, 7, NoiseLaw{0.5});
  const std::int64_t K = 20000;
  Rng rng(8);
  const GameExploreResult res = vi_zero_mg_explore(g, K, make_game_bonus_config(g, K, 0.1), rng);
  const TabularGameRewardFree planner(res.empirical, K);
  Rng thetas(9);
  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd theta = thetas.in_ball(2);
    const NashPlan plan = planner.plan(theta);
    const double exploit =
        best_response_to_min(g, plan.mu, theta) - best_response_to_max(g, plan.nu, theta);
    EXPECT_LE(exploit, 0.15 * 3);
    EXPECT_GE(exploit, -1e-9);
  }
}

TEST(Vmg, OneMaxActionApproachabilityMatchesSingleAgent) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 7, NoiseLaw{0.5});
  const TabularVMG g(m, 2, 1);
  const ConvexSet set(Box{Eigen::Vector2d(1, 1), Eigen::Vector2d(2, 2)});
  const std::int64_t K = 1000;
  Rng e1(3), e2(3);
  const GameExploreResult mg = vi_zero_mg_explore(g, K, make_game_bonus_config(g, K, 0.1), e1);
  const ExploreResult sa = vi_zero_explore(m, K, make_bonus_config(2, 3, 2, K, 3, 0.1), e2);
  const TabularGameRewardFree game_planner(mg.empirical, K);
  const TabularRewardFree planner(sa.empirical, K);
  FixedAdversary adversary(Policy::uniform(3, 3, 1));
  Rng r1(4), r2(4);
  const ApproachConfig cfg{300, 1};
  const GameApproachResult a = run_approachability_mg(g, game_planner, set, cfg, adversary, r1);
  const ApproachResult b = run_approachability(m, planner, set, cfg, r2);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].theta, b.log[i].theta) << "iteration " << i;
    EXPECT_EQ(a.log[i].v_hat, b.log[i].v_hat) << "iteration " << i;
  }
}

TEST(Vmg, CoveringSetGivesZeroDistance) {
  const TabularVMG g = random_game(2, 2, 2, 2, 2, 3);
  const std::int64_t K = 300;
  Rng rng(2);
  const GameExploreResult ex = vi_zero_mg_explore(g, K, make_game_bonus_config(g, K, 0.1), rng);
  const TabularGameRewardFree planner(ex.empirical, K);
  FixedAdversary adversary(Policy::uniform(2, 2, 2));
  const ConvexSet big(Ball{Eigen::Vector2d::Zero(), 3.0});
  const GameApproachResult res = run_approachability_mg(g, planner, big, {100, 1}, adversary, rng);
  for (const auto& it : res.log) EXPECT_EQ(it.running_distance, 0.0);
  EXPECT_EQ(res.min_policies.size(), 100u);
}

TEST(Vmg, BestResponseAdversaryAnswersPreviousPolicy) {
  const TabularVMG g = random_game(2, 2, 3, 2, 2, 3);
  BestResponseAdversary adv(g);
  Rng rng(3);
  const Policy mu = testing::random_policy(2, 2, 2, rng);
  const Eigen::Vector2d theta(0.5, 0.5);
  const Policy nu = adv.next({2, theta, &mu});
  EXPECT_NEAR(theta.dot(exact_game_value(g, mu, nu)), best_response_to_min(g, mu, theta), 1e-12);
}

}  // namespace
}  // namespace approach
