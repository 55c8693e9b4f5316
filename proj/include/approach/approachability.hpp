#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "approach/convex_set.hpp"
#include "approach/reward_free.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach {

/// Euclidean projection onto the unit ball.
Eigen::VectorXd project_ball(const Eigen::VectorXd& x);

/// Online gradient ascent on the unit ball with step eta_t = sqrt(1 / (H^2 t)).
struct OgaState {
  Eigen::VectorXd theta;
  /// 1-based index of the next update.
  std::int64_t t = 1;
  int horizon = 1;

  static OgaState start(int dim, int horizon);
  double step_size() const;
};

/// theta <- project_ball(theta + eta_t (v_hat - argmax_{x in C} <theta, x>)), t <- t + 1.
OgaState oga_update(const OgaState& state, const Eigen::VectorXd& v_hat, const ConvexSet& set);

/// u(theta) = <theta, v_hat> - max_{x in C} <theta, x>
double oga_utility(const Eigen::VectorXd& theta, const Eigen::VectorXd& v_hat, const ConvexSet& set);

struct ApproachConfig {
  std::int64_t iterations = 1000;
  /// Episodes averaged into each v_hat; 1 is the plain meta-algorithm.
  int rollouts_per_iteration = 1;
};

struct ApproachIteration {
  std::int64_t t;
  Eigen::VectorXd theta;
  Eigen::VectorXd v_hat;
  double utility;
  /// dist(average of v_hat so far, C); exact values are reported separately.
  double running_distance;
};

struct ApproachResult {
  MixturePolicy policy;
  std::vector<ApproachIteration> log;
  std::int64_t exploration_episodes = 0;
  std::int64_t rollout_episodes = 0;
};

/// Meta-algorithm: best responses from the reward-free planner against OGA on theta.
/// At iteration t the planner is queried with -theta^t, the resulting policy is
/// rolled out in `model`, and the summed return drives the OGA step.
ApproachResult run_approachability(const TabularVMDP& model, const RewardFreePlanner& planner,
                                   const ConvexSet& set, const ApproachConfig& cfg, Rng& rng);

/// T = ceil(c H^2 iota / eps^2) with iota = log(d / delta).
std::int64_t prescribed_iterations(int horizon, int reward_dim, double epsilon, double delta,
                                   double c = 1.0);

}  // namespace approach
