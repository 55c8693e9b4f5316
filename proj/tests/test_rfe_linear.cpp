#include <gtest/gtest.h>

#include <cmath>

#include "approach/environments.hpp"
#include "approach/errors.hpp"
#include "approach/planner.hpp"
#include "approach/rfe_linear.hpp"

namespace approach {
namespace {

TEST(EllipticalBonus, IdentityGram) {
  const Eigen::Vector3d phi(0.6, 0.8, 0.0);
  EXPECT_DOUBLE_EQ(elliptical_bonus(Eigen::Matrix3d::Identity(), phi, 2.0, 10.0), 2.0);
}

TEST(EllipticalBonus, ClippedAtHorizon) {
  const Eigen::Vector2d phi(1.0, 0.0);
  EXPECT_EQ(elliptical_bonus(Eigen::Matrix2d::Identity(), phi, 1e6, 4.0), 4.0);
}

TEST(EllipticalBonus, RejectsIndefiniteInverse) {
  const Eigen::Vector2d phi(1.0, 0.0);
  EXPECT_THROW(elliptical_bonus(-Eigen::Matrix2d::Identity(), phi, 1.0, 4.0), NumericalError);
}

TEST(EllipticalBonus, RankOneUpdateMatchesDirectInverse) {
  Rng rng(8);
  GramState g(4);
  for (int i = 0; i < 25; ++i) g.add(rng.in_ball(4));
  const Eigen::VectorXd phi = rng.in_ball(4);
  const double beta = 1.7;
  const double q = phi.dot(g.inverse() * phi);
  const Eigen::MatrixXd direct = (g.matrix() + phi * phi.transpose()).inverse();
  const double expected = beta * std::sqrt(q / (1.0 + q));
  EXPECT_NEAR(elliptical_bonus(direct, phi, beta, 1e9), expected, 1e-12);
  g.add(phi);
  EXPECT_NEAR(elliptical_bonus(g.inverse(), phi, beta, 1e9), expected, 1e-12);
}

TEST(GramState, DriftStaysSmallOverManyUpdates) {
  Rng rng(9);
  GramState g(6);
  for (int i = 0; i < 10000; ++i) g.add(rng.in_ball(6));
  EXPECT_EQ(g.updates(), 10000);
  EXPECT_LE((g.inverse() - g.matrix().inverse()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(g.drift(), 1e-8);
}

TEST(LinearBeta, Formula) {
  const double iota = std::log(4.0 * 2 * 1000 * 5 / 0.1);
  EXPECT_DOUBLE_EQ(linear_beta(4, 2, 1000, 5, 0.1), 0.1 * 4 * 5 * std::sqrt(iota));
  EXPECT_THROW(linear_beta(4, 2, 0, 5, 0.1), ConfigError);
}

TEST(LinearVmdp, OneHotReproducesTabularModel) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 4, NoiseLaw{0.2});
  const LinearVMDP lin = one_hot_linear(m);
  EXPECT_EQ(lin.feature_dim(), 6);
  for (std::size_t i = 0; i < m.transitions().size(); ++i)
    EXPECT_NEAR(lin.tabular().transitions()[i], m.transitions()[i], 1e-15);
  EXPECT_LE((lin.tabular().mean_returns() - m.mean_returns()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(lin.tabular().noise().level, 0.2);
}

TEST(LinearVmdp, RejectsLongFeatures) {
  Eigen::MatrixXd phi(1, 2);
  phi << 1.0, 1.0;
  try {
    LinearVMDP(1, 1, 1, 0, phi, {Eigen::MatrixXd::Constant(1, 2, 0.5)},
               {Eigen::MatrixXd::Zero(1, 2)});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "phi");
  }
}

TEST(LinearExplore, OneHotGramDiagonalIsCountPlusOne) {
  const TabularVMDP m = random_dense(3, 2, 3, 2, 7, NoiseLaw{0.5});
  const LinearVMDP lin = one_hot_linear(m);
  Rng rng(3);
  const LinearExploreResult res = linear_explore(lin, 500, 1.0, rng);
  std::vector<int> n(m.num_sa(), 0);
  for (const auto& x : res.dataset.samples) ++n[m.sa_index(x.h, x.state, x.action)];
  for (int h = 0; h < 3; ++h)
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a) {
        EXPECT_EQ(res.gram[h].matrix()(s * 2 + a, s * 2 + a), n[m.sa_index(h, s, a)] + 1.0);
        EXPECT_NEAR(res.gram[h].inverse()(s * 2 + a, s * 2 + a), 1.0 / (n[m.sa_index(h, s, a)] + 1.0),
                    1e-10);
      }
}

TEST(LinearExplore, OneEpisodeGivesHTuples) {
  const LinearVMDP lin = random_linear(4, 3, 5, 2, 3, 1);
  Rng rng(1);
  const LinearExploreResult res = linear_explore(lin, 1, 1.0, rng);
  ASSERT_EQ(res.dataset.samples.size(), 5u);
  for (int h = 0; h < 5; ++h) EXPECT_EQ(res.dataset.samples[h].h, h);
}

TEST(LinearExplore, TraceIdentityForUnitFeatures) {
  const LinearVMDP lin = one_hot_linear(random_dense(1, 2, 3, 2, 5));
  Rng rng(2);
  const std::int64_t K = 300;
  const LinearExploreResult res = linear_explore(lin, K, 0.5, rng);
  for (int h = 0; h < 3; ++h) EXPECT_NEAR(res.gram[h].matrix().trace(), K + 2.0, 1e-9);
}

TEST(LinearPlan, ZeroReturnModelStaysBelowHorizon) {
  const TabularVMDP base = random_dense(3, 2, 4, 2, 6);
  const TabularVMDP zero(3, 2, 4, 2, 0, base.transitions(), Eigen::MatrixXd::Zero(2, base.num_sa()));
  const LinearVMDP lin = one_hot_linear(zero);
  Rng rng(4);
  const LinearExploreResult res = linear_explore(lin, 50, 1.0, rng);
  const LinearPlan plan = linear_plan(res.dataset, Eigen::Vector2d::Zero(), 1.0);
  EXPECT_LE(plan.initial_value(), 4.0);
  EXPECT_GE(plan.initial_value(), 0.0);
}

TEST(LinearPlan, EmptyDatasetIsRejected) {
  LinearDataset empty{1, 1, 1, 1, 0, Eigen::MatrixXd::Ones(1, 1), {}};
  EXPECT_THROW(linear_plan(empty, Eigen::VectorXd::Zero(1), 1.0), InputError);
}

struct ChainRun {
  TabularVMDP model = chain(4, 4, 2);
  LinearExploreResult explored;
  double beta;
};

ChainRun explore_chain() {
  ChainRun run;
  const LinearVMDP lin = one_hot_linear(run.model);
  const std::int64_t K = 2000;
  run.beta = linear_beta(lin.feature_dim(), 2, K, 4, 0.1);
  Rng rng(5);
  run.explored = linear_explore(lin, K, run.beta, rng);
  return run;
}

TEST(LinearPlan, RecoversChainOptimalFirstAction) {
  const ChainRun run = explore_chain();
  const Eigen::Vector2d theta(1, 0);
  const LinearPlan plan = linear_plan(run.explored.dataset, theta, run.beta);
  const PlanResult truth = value_iteration(ScalarizedView(run.model, theta));
  EXPECT_EQ(plan.policy.prob(0, 0, 0), truth.policy.prob(0, 0, 0));
  EXPECT_EQ(truth.policy.prob(0, 0, 0), 1.0);
  EXPECT_NEAR(scalarized_policy_value(ScalarizedView(run.model, theta), plan.policy),
              truth.initial_value(), 1e-12);
}

TEST(LinearPlan, DuplicatedDatasetGivesTheSameGreedyPolicy) {
  const ChainRun run = explore_chain();
  LinearDataset doubled = run.explored.dataset;
  doubled.samples.insert(doubled.samples.end(), run.explored.dataset.samples.begin(),
                         run.explored.dataset.samples.end());
  for (const Eigen::Vector2d& theta : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1),
                                       Eigen::Vector2d(0.6, -0.8)}) {
    const LinearPlan a = linear_plan(run.explored.dataset, theta, run.beta);
    const LinearPlan b = linear_plan(doubled, theta, run.beta);
    EXPECT_EQ(a.policy, b.policy);
  }
}

TEST(LinearPlan, PlannerMatchesFreeFunction) {
  const ChainRun run = explore_chain();
  const LinearRewardFree planner(run.explored.dataset, run.beta, 2000);
  const Eigen::Vector2d theta(0.3, 0.4);
  EXPECT_EQ(planner.plan(theta), linear_plan(run.explored.dataset, theta, run.beta).policy);
  EXPECT_THROW(planner.plan(Eigen::Vector2d(1, 1)), InputError);
}

}  // namespace
}  // namespace approach
