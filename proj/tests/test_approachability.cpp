#include <gtest/gtest.h>

#include <cmath>

#include "approach/approachability.hpp"
#include "approach/environments.hpp"
#include "approach/errors.hpp"
#include "approach/rfe_tabular.hpp"
#include "support.hpp"

namespace approach {
namespace {

ConvexSet origin(int dim) { return ConvexSet(HullOfPoints{{Eigen::VectorXd::Zero(dim)}}); }

TEST(ProjectBall, ClosedForms) {
  EXPECT_EQ(project_ball(Eigen::Vector2d(0.3, -0.2)), Eigen::VectorXd(Eigen::Vector2d(0.3, -0.2)));
  EXPECT_LE((project_ball(Eigen::Vector2d(3, 4)) - Eigen::Vector2d(0.6, 0.8)).norm(), 1e-15);
}

TEST(ProjectBall, Idempotent) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd p = project_ball(rng.in_ball(4, 5.0));
    EXPECT_LE((project_ball(p) - p).norm(), 1e-15);
  }
}

TEST(Oga, FirstStepFromZero) {
  const OgaState st = OgaState::start(2, 1);
  EXPECT_EQ(st.step_size(), 1.0);
  const OgaState next = oga_update(st, Eigen::Vector2d(1, 0), origin(2));
  EXPECT_EQ(next.theta, Eigen::VectorXd(Eigen::Vector2d(1, 0)));
  EXPECT_EQ(next.t, 2);
}

TEST(Oga, ZeroGradientKeepsTheta) {
  const ConvexSet ball(Ball{Eigen::Vector2d(1, 1), 0.5});
  OgaState st = OgaState::start(2, 3);
  st.theta = Eigen::Vector2d(0.3, -0.4);
  st.t = 5;
  const OgaState next = oga_update(st, support_argmax(ball, st.theta), ball);
  EXPECT_EQ(next.theta, st.theta);
}

TEST(Oga, StepSize) {
  OgaState st = OgaState::start(3, 4);
  st.t = 9;
  EXPECT_DOUBLE_EQ(st.step_size(), 1.0 / 12.0);
}

TEST(Oga, RegretWithinBound) {
  Rng rng(3);
  const int H = 3;
  const ConvexSet set(Ball{Eigen::Vector2d(0.5, -0.5), 1.0});
  for (int kind = 0; kind < testing::kAdversaryKinds; ++kind) {
    const auto m = testing::measure_oga_regret(set, H, 1000, kind, rng);
    EXPECT_LE(m.regret, 3.0 * 2.0 * 2.0 * H * std::sqrt(1000.0)) << "sequence " << kind;
    EXPECT_LE(m.grid_best, m.closed_form_best + 1e-9);
    EXPECT_GE(m.grid_best, m.closed_form_best - 1e-3 * 1000 * H);
  }
}

TEST(PrescribedIterations, Formula) {
  EXPECT_EQ(prescribed_iterations(4, 3, 0.5, 0.1, 1.0),
            static_cast<std::int64_t>(std::ceil(16 * std::log(30.0) / 0.25)));
  EXPECT_THROW(prescribed_iterations(4, 3, 0.0, 0.1, 1.0), ConfigError);
}

ApproachResult run(const TabularVMDP& m, const ConvexSet& set, std::int64_t K, std::int64_t T,
                   std::uint64_t seed) {
  Rng root(seed);
  Rng explore = root.split(1), roll = root.split(2);
  const ExploreResult ex = vi_zero_explore(
      m, K, make_bonus_config(m.reward_dim(), m.num_states(), m.num_actions(), K, m.horizon(), 0.1),
      explore);
  const TabularRewardFree planner(ex.empirical, K);
  return run_approachability(m, planner, set, ApproachConfig{T, 1}, roll);
}

TEST(Approachability, CoveringSetGivesZeroDistance) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 5, NoiseLaw{0.5});
  const ConvexSet big(Ball{Eigen::Vector2d::Zero(), 4.0});
  const ApproachResult res = run(m, big, 500, 200, 1);
  EXPECT_EQ(distance(big, exact_policy_value(m, res.policy)), 0.0);
}

TEST(Approachability, SymmetricArmsReachTheOrigin) {
  const int H = 4;
  Eigen::MatrixXd r(1, 2 * H);
  for (int h = 0; h < H; ++h) r(0, 2 * h) = 1.0, r(0, 2 * h + 1) = -1.0;
  const TabularVMDP m(1, 2, H, 1, 0, std::vector<double>(2 * H, 1.0), r);
  const ApproachResult res = run(m, origin(1), 1000, 5000, 7);
  EXPECT_LE(std::abs(exact_policy_value(m, res.policy)[0]), 0.15 * H);
  bool plays_first = false, plays_second = false;
  for (const Policy& p : res.policy.components) {
    plays_first |= p.prob(0, 0, 0) == 1.0;
    plays_second |= p.prob(0, 0, 1) == 1.0;
  }
  EXPECT_TRUE(plays_first && plays_second);
}

TEST(Approachability, OutputIsTheUniformMixture) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 5, NoiseLaw{0.5});
  const ConvexSet set(Box{Eigen::Vector2d(1, 1), Eigen::Vector2d(2, 2)});
  const ApproachResult res = run(m, set, 500, 300, 2);
  ASSERT_EQ(res.policy.components.size(), 300u);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(2);
  for (const Policy& p : res.policy.components) avg += exact_policy_value(m, p) / 300.0;
  EXPECT_LE((exact_policy_value(m, res.policy) - avg).norm(), 1e-12);
  for (const auto& it : res.log) EXPECT_LE(it.theta.norm(), 1.0 + 1e-12);
  EXPECT_EQ(res.rollout_episodes, 300);
  EXPECT_EQ(res.exploration_episodes, 500);
}

TEST(Approachability, SameSeedSameLog) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 5, NoiseLaw{0.5});
  const ConvexSet set(Ball{Eigen::Vector2d(1, 1), 0.3});
  const ApproachResult a = run(m, set, 300, 100, 9), b = run(m, set, 300, 100, 9);
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].theta, b.log[i].theta);
    EXPECT_EQ(a.log[i].v_hat, b.log[i].v_hat);
  }
}

TEST(Approachability, RejectsMismatchedSet) {
  const TabularVMDP m = random_dense(2, 2, 2, 2, 5);
  Rng rng(1);
  const ExploreResult ex = vi_zero_explore(m, 10, make_bonus_config(2, 2, 2, 10, 2, 0.1), rng);
  const TabularRewardFree planner(ex.empirical, 10);
  EXPECT_THROW(run_approachability(m, planner, origin(3), {}, rng), ConfigError);
}

}  // namespace
}  // namespace approach
