#include "approach/vmg.hpp"

#include <algorithm>

#include "approach/errors.hpp"
#include "approach/planner.hpp"

namespace approach {

TabularVMG::TabularVMG(TabularVMDP joint, int min_actions, int max_actions)
    : joint_(std::move(joint)), A_(min_actions), B_(max_actions) {
  if (A_ <= 0 || B_ <= 0) throw ConfigError("player action counts must be positive");
  if (joint_.num_actions() != A_ * B_)
    throw ConfigError("joint action count must equal A * B", "B");
}

Policy product_policy(const Policy& mu, const Policy& nu) {
  if (mu.horizon() != nu.horizon() || mu.num_states() != nu.num_states())
    throw ConfigError("player policies disagree on horizon or states");
  const int H = mu.horizon(), S = mu.num_states(), A = mu.num_actions(), B = nu.num_actions();
  std::vector<double> probs(static_cast<std::size_t>(H) * S * A * B);
  std::size_t k = 0;
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        for (int b = 0; b < B; ++b) probs[k++] = mu.prob(h, s, a) * nu.prob(h, s, b);
  return Policy(H, S, A * B, std::move(probs));
}

Eigen::VectorXd exact_game_value(const TabularVMG& game, const Policy& mu, const Policy& nu) {
  return exact_policy_value(game.joint(), product_policy(mu, nu));
}

namespace {

// Marginalizes the joint model over one player's fixed policy.
TabularVMDP induced_model(const TabularVMG& game, const Policy& fixed, bool fixed_is_min) {
  const TabularVMDP& J = game.joint();
  const int S = J.num_states(), H = J.horizon(), d = J.reward_dim();
  const int A = game.min_actions(), B = game.max_actions();
  const int free_actions = fixed_is_min ? B : A;
  const int fixed_actions = fixed_is_min ? A : B;
  if (fixed.horizon() != H || fixed.num_states() != S || fixed.num_actions() != fixed_actions)
    throw ConfigError("fixed player policy does not match the game");
  std::vector<double> P(static_cast<std::size_t>(H) * S * free_actions * S, 0.0);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, H * S * free_actions);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int f = 0; f < free_actions; ++f) {
        const int col = (h * S + s) * free_actions + f;
        double* row = P.data() + static_cast<std::size_t>(col) * S;
        for (int g = 0; g < fixed_actions; ++g) {
          const double w = fixed.prob(h, s, g);
          if (w == 0.0) continue;
          const int joint = fixed_is_min ? game.joint_action(g, f) : game.joint_action(f, g);
          const auto jr = J.transition(h, s, joint);
          for (int sp = 0; sp < S; ++sp) row[sp] += w * jr[sp];
          r.col(col) += w * J.mean_return(h, s, joint);
        }
      }
  return TabularVMDP(S, free_actions, H, d, J.initial_state(), std::move(P), std::move(r),
                     J.noise());
}

}  // namespace

TabularVMDP induced_max_player_model(const TabularVMG& game, const Policy& mu) {
  return induced_model(game, mu, true);
}

TabularVMDP induced_min_player_model(const TabularVMG& game, const Policy& nu) {
  return induced_model(game, nu, false);
}

NashPlan nash_value_iteration(const TabularVMDP& J, int A, int B, std::span<const double> reward,
                              const MatrixGameOptions& opts) {
  const int S = J.num_states(), H = J.horizon();
  if (J.num_actions() != A * B) throw ConfigError("joint model does not match A * B");
  if (reward.size() != static_cast<std::size_t>(J.num_sa()))
    throw InputError("reward table has the wrong size");
  NashPlan plan;
  plan.num_states = S;
  plan.initial_state = J.initial_state();
  plan.V.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  std::vector<double> mu(static_cast<std::size_t>(H) * S * A), nu(static_cast<std::size_t>(H) * S * B);
  Eigen::MatrixXd M(A, B);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = plan.V.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a)
        for (int b = 0; b < B; ++b) {
          const int idx = J.sa_index(h, s, a * B + b);
          const auto row = J.transition(h, s, a * B + b);
          double q = reward[idx];
          for (int sp = 0; sp < S; ++sp) q += row[sp] * next[sp];
          M(a, b) = q;
        }
      const MatrixGameSolution sol = solve_matrix_game(M, opts);
      plan.V[static_cast<std::size_t>(h) * S + s] = sol.value;
      plan.max_gap = std::max(plan.max_gap, sol.gap);
      for (int a = 0; a < A; ++a) mu[(static_cast<std::size_t>(h) * S + s) * A + a] = sol.row_strategy[a];
      for (int b = 0; b < B; ++b) nu[(static_cast<std::size_t>(h) * S + s) * B + b] = sol.col_strategy[b];
    }
  }
  plan.mu = Policy(H, S, A, std::move(mu));
  plan.nu = Policy(H, S, B, std::move(nu));
  return plan;
}

NashPlan nash_plan(const TabularVMG& game, const Eigen::VectorXd& theta,
                   const MatrixGameOptions& opts) {
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
  return nash_value_iteration(game.joint(), game.min_actions(), game.max_actions(),
                              scalarize(game.joint(), theta), opts);
}

double best_response_to_min(const TabularVMG& game, const Policy& mu, const Eigen::VectorXd& theta) {
  const TabularVMDP m = induced_max_player_model(game, mu);
  return value_iteration(m, scalarize(m, theta)).initial_value();
}

double best_response_to_max(const TabularVMG& game, const Policy& nu, const Eigen::VectorXd& theta) {
  const TabularVMDP m = induced_min_player_model(game, nu);
  return -value_iteration(m, scalarize(m, -theta)).initial_value();
}

BonusConfig make_game_bonus_config(const TabularVMG& game, std::int64_t episodes, double delta,
                                   double c_beta) {
  return make_bonus_config(game.reward_dim(), game.num_states(),
                           game.min_actions() * game.max_actions(), episodes, game.horizon(),
                           delta, c_beta);
}

GameExploreResult vi_zero_mg_explore(const TabularVMG& game, std::int64_t episodes,
                                     const BonusConfig& cfg, Rng& rng) {
  ExploreResult res = vi_zero_explore(game.joint(), episodes, cfg, rng);
  return GameExploreResult{
      EmpiricalGameModel{std::move(res.empirical), game.min_actions(), game.max_actions()},
      std::move(res.log)};
}

TabularGameRewardFree::TabularGameRewardFree(const EmpiricalGameModel& empirical,
                                             std::int64_t episodes, MatrixGameOptions opts)
    : planning_(empirical.joint.planning_model()),
      A_(empirical.min_actions),
      B_(empirical.max_actions),
      episodes_(episodes),
      opts_(opts) {}

NashPlan TabularGameRewardFree::plan(const Eigen::VectorXd& theta) const {
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
  return nash_value_iteration(planning_, A_, B_, scalarize(planning_, theta), opts_);
}

UniformAdversary::UniformAdversary(const TabularVMG& game)
    : nu_(Policy::uniform(game.horizon(), game.num_states(), game.max_actions())) {}

Policy BestResponseAdversary::next(const AdversaryContext& ctx) {
  const Policy mu = ctx.previous_mu != nullptr
                        ? *ctx.previous_mu
                        : Policy::uniform(game_.horizon(), game_.num_states(), game_.min_actions());
  const TabularVMDP m = induced_max_player_model(game_, mu);
  return value_iteration(m, scalarize(m, ctx.theta)).policy;
}

GameApproachResult run_approachability_mg(const TabularVMG& game,
                                          const TabularGameRewardFree& planner,
                                          const ConvexSet& set, const ApproachConfig& cfg,
                                          Adversary& adversary, Rng& rng) {
  if (cfg.iterations < 1) throw ConfigError("approachability needs T >= 1", "T");
  if (cfg.rollouts_per_iteration < 1) throw ConfigError("need at least one rollout", "n_roll");
  if (set.dim() != game.reward_dim()) throw ConfigError("target set dimension mismatch", "set");

  GameApproachResult res;
  res.exploration_episodes = planner.exploration_episodes();
  res.log.reserve(static_cast<std::size_t>(cfg.iterations));
  OgaState oga = OgaState::start(game.reward_dim(), game.horizon());
  Eigen::VectorXd value_sum = Eigen::VectorXd::Zero(game.reward_dim());
  for (std::int64_t t = 1; t <= cfg.iterations; ++t) {
    NashPlan np = planner.plan(oga.theta);
    const Policy nu = adversary.next(
        {t, oga.theta, res.min_policies.empty() ? nullptr : &res.min_policies.back()});
    const Policy joint = product_policy(np.mu, nu);
    Eigen::VectorXd v_hat = Eigen::VectorXd::Zero(game.reward_dim());
    for (int i = 0; i < cfg.rollouts_per_iteration; ++i)
      v_hat += sample_episode(game.joint(), joint, rng).return_sum();
    v_hat /= cfg.rollouts_per_iteration;
    res.rollout_episodes += cfg.rollouts_per_iteration;

    value_sum += exact_policy_value(game.joint(), joint);
    const double running = distance(set, value_sum / static_cast<double>(t));
    res.log.push_back({t, oga.theta, v_hat, running, np.max_gap});

    oga = oga_update(oga, v_hat, set);
    res.min_policies.push_back(std::move(np.mu));
  }
  res.average_value = value_sum / static_cast<double>(cfg.iterations);
  return res;
}

}  // namespace approach
