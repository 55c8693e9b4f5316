#include "approach/cmdp.hpp"

#include <cmath>

#include "approach/errors.hpp"
#include "approach/planner.hpp"
#include "approach/rfe_tabular.hpp"

namespace approach {

AugmentedVMDP augment(const TabularVMDP& model, std::span<const double> cost) {
  if (cost.size() != static_cast<std::size_t>(model.num_sa()))
    throw InputError("cost table has the wrong size");
  const int d = model.reward_dim();
  Eigen::MatrixXd r(d + 1, model.num_sa());
  for (int i = 0; i < model.num_sa(); ++i) {
    if (!(std::abs(cost[i]) <= 1.0)) throw InputError("cost entries must lie in [-1, 1]");
    r.col(i).head(d) = model.mean_returns().col(i) * kAugmentScale;
    r(d, i) = cost[i] * kAugmentScale;
  }
  return AugmentedVMDP{TabularVMDP(model.num_states(), model.num_actions(), model.horizon(), d + 1,
                                   model.initial_state(), model.transitions(), std::move(r),
                                   model.noise()),
                       std::vector<double>(cost.begin(), cost.end())};
}

double exact_cost_value(const TabularVMDP& model, std::span<const double> cost,
                        const Policy& policy) {
  return evaluate_scalar(model, cost, policy);
}

double exact_cost_value(const TabularVMDP& model, std::span<const double> cost,
                        const MixturePolicy& policy) {
  policy.validate();
  double v = 0.0;
  for (std::size_t i = 0; i < policy.components.size(); ++i)
    v += policy.weights[i] * evaluate_scalar(model, cost, policy.components[i]);
  return v;
}

ConvexSet cost_target_set(const ConvexSet& base, int horizon, double mid) {
  return augment_set(base, -static_cast<double>(horizon), mid);
}

std::int64_t estimation_episodes(int horizon, int reward_dim, double epsilon, double delta,
                                 double c) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive", "epsilon");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]", "delta");
  if (!(c > 0.0)) throw ConfigError("estimation constant must be positive", "estimation_constant");
  const double H = horizon;
  const double log_term = std::max(std::log(reward_dim * H / (epsilon * delta)), 1.0);
  return static_cast<std::int64_t>(std::ceil(c * H * H * log_term / (epsilon * epsilon)));
}

CmdpResult solve_cmdp(const TabularVMDP& model, std::span<const double> cost,
                      const ConvexSet& set, const CmdpConfig& cfg, Rng& rng) {
  const int H = model.horizon();
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= H))
    throw ConfigError("epsilon must lie in (0, H]", "epsilon");
  if (set.dim() != model.reward_dim()) throw ConfigError("target set dimension mismatch", "set");
  if (cfg.approach_iterations < 1) throw ConfigError("approachability needs T >= 1", "T");

  const AugmentedVMDP aug = augment(model, cost);
  const int steps = cfg.search_iterations > 0
                        ? cfg.search_iterations
                        : static_cast<int>(std::ceil(std::log2(H / cfg.epsilon)));

  CmdpResult res;
  res.estimation_episodes_per_step =
      estimation_episodes(H, model.reward_dim(), cfg.epsilon, cfg.delta, cfg.estimation_constant);

  Rng explore_rng = rng.split(0);
  const BonusConfig bonus_cfg =
      make_bonus_config(aug.model.reward_dim(), aug.model.num_states(), aug.model.num_actions(),
                        cfg.exploration_episodes, H, cfg.delta, cfg.c_beta);
  ExploreResult explored = vi_zero_explore(aug.model, cfg.exploration_episodes, bonus_cfg, explore_rng);
  const TabularRewardFree planner(std::move(explored.empirical), cfg.exploration_episodes);
  res.total_episodes = cfg.exploration_episodes;

  double L = cfg.range == CostRange::kFull ? -static_cast<double>(H) : 0.0;
  double R = static_cast<double>(H);
  ApproachConfig app_cfg;
  app_cfg.iterations = cfg.approach_iterations;
  for (int t = 1; t <= steps; ++t) {
    const double mid = (R + L) / 2.0;
    const ConvexSet target = cost_target_set(set, H, mid);
    const ConvexSet scaled_target = scaled(target, kAugmentScale);

    Rng app_rng = rng.split(2 * static_cast<std::uint64_t>(t) - 1);
    ApproachResult app = run_approachability(aug.model, planner, scaled_target, app_cfg, app_rng);

    Rng est_rng = rng.split(2 * static_cast<std::uint64_t>(t));
    Eigen::VectorXd v_bar = Eigen::VectorXd::Zero(aug.model.reward_dim());
    for (std::int64_t i = 0; i < res.estimation_episodes_per_step; ++i)
      v_bar += sample_episode(aug.model, app.policy, est_rng).return_sum();
    v_bar /= static_cast<double>(res.estimation_episodes_per_step);
    res.total_episodes += app.rollout_episodes + res.estimation_episodes_per_step;

    const double dist = distance(target, AugmentedVMDP::unscale(v_bar));
    const bool feasible = dist <= 2.0 * cfg.epsilon;
    res.log.push_back({t, L, R, mid, dist, feasible});
    if (feasible)
      R = mid;
    else
      L = mid;
    res.policy = std::move(app.policy);
  }
  res.L = L;
  res.R = R;
  return res;
}

}  // namespace approach
