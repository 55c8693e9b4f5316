#include "approach/approachability.hpp"

#include <cmath>

#include "approach/errors.hpp"

namespace approach {

Eigen::VectorXd project_ball(const Eigen::VectorXd& x) {
  const double n = x.norm();
  if (n <= 1.0) return x;
  return x / n;
}

OgaState OgaState::start(int dim, int horizon) {
  if (dim <= 0 || horizon <= 0) throw InputError("OGA needs positive dimension and horizon");
  return OgaState{Eigen::VectorXd::Zero(dim), 1, horizon};
}

double OgaState::step_size() const {
  return std::sqrt(1.0 / (static_cast<double>(horizon) * horizon * static_cast<double>(t)));
}

OgaState oga_update(const OgaState& state, const Eigen::VectorXd& v_hat, const ConvexSet& set) {
  if (v_hat.size() != state.theta.size()) throw InputError("v_hat has the wrong dimension");
  OgaState next = state;
  const Eigen::VectorXd grad = v_hat - support_argmax(set, state.theta);
  next.theta = project_ball(state.theta + state.step_size() * grad);
  ++next.t;
  return next;
}

double oga_utility(const Eigen::VectorXd& theta, const Eigen::VectorXd& v_hat, const ConvexSet& set) {
  return theta.dot(v_hat) - support(set, theta);
}

ApproachResult run_approachability(const TabularVMDP& model, const RewardFreePlanner& planner,
                                   const ConvexSet& set, const ApproachConfig& cfg, Rng& rng) {
  if (cfg.iterations < 1) throw ConfigError("approachability needs T >= 1", "T");
  if (cfg.rollouts_per_iteration < 1) throw ConfigError("need at least one rollout", "n_roll");
  if (set.dim() != model.reward_dim()) throw ConfigError("target set dimension mismatch", "set");

  ApproachResult res;
  res.exploration_episodes = planner.exploration_episodes();
  res.log.reserve(static_cast<std::size_t>(cfg.iterations));
  std::vector<Policy> components;
  components.reserve(static_cast<std::size_t>(cfg.iterations));

  OgaState oga = OgaState::start(model.reward_dim(), model.horizon());
  Eigen::VectorXd v_sum = Eigen::VectorXd::Zero(model.reward_dim());
  for (std::int64_t t = 1; t <= cfg.iterations; ++t) {
    Policy pi = planner.plan(-oga.theta);
    Eigen::VectorXd v_hat = Eigen::VectorXd::Zero(model.reward_dim());
    for (int i = 0; i < cfg.rollouts_per_iteration; ++i)
      v_hat += sample_episode(model, pi, rng).return_sum();
    v_hat /= cfg.rollouts_per_iteration;
    res.rollout_episodes += cfg.rollouts_per_iteration;

    v_sum += v_hat;
    const double utility = oga_utility(oga.theta, v_hat, set);
    const double running = distance(set, v_sum / static_cast<double>(t));
    res.log.push_back({t, oga.theta, v_hat, utility, running});

    oga = oga_update(oga, v_hat, set);
    components.push_back(std::move(pi));
  }
  res.policy = MixturePolicy::uniform(std::move(components));
  return res;
}

std::int64_t prescribed_iterations(int horizon, int reward_dim, double epsilon, double delta,
                                   double c) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive", "epsilon");
  const double iota = std::log(reward_dim / delta);
  return static_cast<std::int64_t>(
      std::ceil(c * horizon * horizon * std::max(iota, 1.0) / (epsilon * epsilon)));
}

}  // namespace approach
