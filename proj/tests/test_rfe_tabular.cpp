#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "approach/environments.hpp"
#include "approach/errors.hpp"
#include "approach/planner.hpp"
#include "approach/rfe_tabular.hpp"

namespace approach {
namespace {

TEST(Bonus, ClampsZeroCountToOne) {
  const BonusConfig cfg{0.1, 0.1, 2.0};
  EXPECT_EQ(bonus(0, cfg, 3, 5, 4), bonus(1, cfg, 3, 5, 4));
}

TEST(Bonus, DirectEvaluation) {
  const BonusConfig cfg{1.0, 0.1, 1.0};
  EXPECT_DOUBLE_EQ(bonus(4, cfg, 1, 2, 2), 3.0);
}

TEST(Bonus, DecreasesToZero) {
  const BonusConfig cfg{0.1, 0.1, 5.0};
  double prev = bonus(1, cfg, 3, 5, 4);
  for (std::int64_t t = 2; t < 1'000'000; t *= 2) {
    const double b = bonus(t, cfg, 3, 5, 4);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(bonus(std::int64_t{1} << 50, cfg, 3, 5, 4), 1e-5);
}

TEST(Bonus, LogFactor) {
  const BonusConfig cfg = make_bonus_config(3, 5, 3, 50000, 4, 0.1);
  EXPECT_DOUBLE_EQ(cfg.iota, std::log(3.0 * 5 * 3 * 50000 * 4 / 0.1));
  EXPECT_EQ(cfg.c_beta, 0.1);
  EXPECT_THROW(make_bonus_config(3, 5, 3, 0, 4, 0.1), ConfigError);
  EXPECT_THROW(make_bonus_config(3, 5, 3, 10, 4, 0.0), ConfigError);
}

TEST(ViZero, SingleEpisodeReportsH) {
  const TabularVMDP m = random_dense(3, 2, 4, 2, 1);
  Rng rng(1);
  const ExploreResult res = vi_zero_explore(m, 1, make_bonus_config(2, 3, 2, 1, 4, 0.1), rng);
  ASSERT_EQ(res.log.size(), 1u);
  EXPECT_EQ(res.log[0].v_tilde, 4.0);
  EXPECT_EQ(res.snapshot_episode, 1);
  EXPECT_TRUE(res.empirical.has_snapshot());
}

// With one state the optimistic values depend only on the visit counts.
TEST(ViZero, SingleStateClosedForm) {
  const int A = 2, H = 3;
  const TabularVMDP m = random_dense(1, A, H, 2, 4, NoiseLaw{0.3});
  const std::int64_t K = 200;
  const BonusConfig cfg = make_bonus_config(2, 1, A, K, H, 0.1);
  Rng rng(5);
  const ExploreResult res = vi_zero_explore(m, K, cfg, rng);
  // Replay the recursion: Q_h(a) = min{beta(N_h(a)) + V_{h+1}, H} if N > 0 else H.
  std::vector<std::int64_t> n(static_cast<std::size_t>(H) * A, 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < K; ++k) {
    double next = 0.0;
    std::vector<int> greedy(H);
    for (int h = H - 1; h >= 0; --h) {
      double vh = -1.0;
      for (int a = 0; a < A; ++a) {
        const std::int64_t c = n[h * A + a];
        const double pv = static_cast<double>(c) * next / static_cast<double>(c);
        const double q = c > 0 ? std::min(pv + bonus(c, cfg, 2, 1, H), static_cast<double>(H)) : H;
        if (q > vh) {
          vh = q;
          greedy[h] = a;
        }
      }
      next = vh;
    }
    best = std::min(best, next);
    EXPECT_DOUBLE_EQ(res.log[k].v_tilde, next) << "episode " << k;
    EXPECT_DOUBLE_EQ(res.log[k].delta, best);
    for (int h = 0; h < H; ++h) ++n[h * A + greedy[h]];
  }
  for (int h = 0; h < H; ++h)
    for (int a = 0; a < A; ++a) EXPECT_EQ(res.empirical.count(h, 0, a), n[h * A + a]);
  EXPECT_LT(res.log.back().delta, res.log.front().delta);
}

TEST(ViZero, ReachablePairsAreWellVisited) {
  const TabularVMDP m = random_dense(5, 3, 4, 3, 7, NoiseLaw{0.5});
  const std::int64_t K = 50000;
  Rng rng(7);
  const ExploreResult res = vi_zero_explore(m, K, make_bonus_config(3, 5, 3, K, 4, 0.1), rng);
  // Largest occupancy of each (h, s, a) over all deterministic policies reaching it.
  for (int h = 0; h < 4; ++h)
    for (int s = 0; s < 5; ++s)
      for (int a = 0; a < 3; ++a) {
        std::vector<double> reward(m.num_sa(), 0.0);
        reward[m.sa_index(h, s, a)] = 1.0;
        const double reach = value_iteration(m, reward).initial_value();
        if (reach >= 0.02) EXPECT_GE(res.empirical.count(h, s, a), 100) << h << " " << s << " " << a;
      }
}

TEST(EmpiricalModel, UnvisitedPairsPlanUniformlyWithZeroReturn) {
  EmpiricalModel e(3, 2, 2, 2, 0);
  const auto p = e.p_hat(0, 1, 1);
  for (double x : p) EXPECT_DOUBLE_EQ(x, 1.0 / 3);
  EXPECT_EQ(e.r_hat(0, 1, 1), Eigen::Vector2d::Zero());
  e.record(0, 1, 1, Eigen::Vector2d(0.5, 0.0), 2);
  e.record(0, 1, 1, Eigen::Vector2d(0.0, 0.5), 2);
  EXPECT_EQ(e.p_hat(0, 1, 1), (std::vector<double>{0.0, 0.0, 1.0}));
  EXPECT_EQ(e.r_hat(0, 1, 1), Eigen::Vector2d(0.25, 0.25));
}

TEST(EmpiricalModel, SnapshotFreezesTransitions) {
  EmpiricalModel e(2, 1, 1, 1, 0);
  e.record(0, 0, 0, Eigen::VectorXd::Zero(1), 0);
  e.take_snapshot();
  e.record(0, 0, 0, Eigen::VectorXd::Zero(1), 1);
  e.record(0, 0, 0, Eigen::VectorXd::Zero(1), 1);
  const TabularVMDP plan = e.planning_model();
  EXPECT_EQ(plan.transition(0, 0, 0)[0], 1.0);
  EXPECT_NEAR(e.p_hat(0, 0, 0)[1], 2.0 / 3, 1e-15);
}

TEST(RfePlan, ZeroThetaPicksFirstActions) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 7);
  Rng rng(3);
  const ExploreResult res = vi_zero_explore(m, 100, make_bonus_config(2, 3, 2, 100, 3, 0.1), rng);
  const std::vector<int> zeros(9, 0);
  EXPECT_EQ(rfe_plan(res.empirical, Eigen::Vector2d::Zero()), Policy::deterministic(3, 3, 2, zeros));
  EXPECT_THROW(rfe_plan(res.empirical, Eigen::Vector2d(1, 1)), InputError);
}

TEST(RfePlan, RecoversChainOptimum) {
  const TabularVMDP m = chain(4, 4, 2);
  Rng rng(4);
  const std::int64_t K = 5000;
  const ExploreResult res = vi_zero_explore(m, K, make_bonus_config(2, 4, 2, K, 4, 0.1), rng);
  const TabularRewardFree planner(res.empirical, K);
  for (const Eigen::Vector2d& theta : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}) {
    const PlanResult truth = value_iteration(ScalarizedView(m, theta));
    EXPECT_NEAR(scalarized_policy_value(ScalarizedView(m, theta), planner.plan(theta)),
                truth.initial_value(), 1e-12);
  }
  EXPECT_EQ(planner.exploration_episodes(), K);
}

TEST(RfePlan, SeededModelIsNearOptimal) {
  const TabularVMDP m = random_dense(5, 3, 4, 3, 7, NoiseLaw{0.5});
  const std::int64_t K = 50000;
  Rng rng = Rng(7).split(1);
  const ExploreResult res = vi_zero_explore(m, K, make_bonus_config(3, 5, 3, K, 4, 0.1), rng);
  const TabularRewardFree planner(res.empirical, K);
  Rng thetas(123);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ScalarizedView view(m, thetas.in_ball(3));
    worst = std::max(worst, value_iteration(view).initial_value() -
                                scalarized_policy_value(view, planner.plan(view.theta)));
  }
  EXPECT_LE(worst, 0.1 * 4);
}

}  // namespace
}  // namespace approach
