#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/approachability.hpp"
#include "approach/convex_set.hpp"
#include "approach/matrix_game.hpp"
#include "approach/rfe_tabular.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach {

/// Two-player zero-sum vector-valued Markov game. The min-player picks a in
/// [0, A) and the max-player b in [0, B); the game is stored as a VMDP over the
/// joint action a * B + b, so every single-agent routine applies to it directly.
class TabularVMG {
 public:
  TabularVMG(TabularVMDP joint, int min_actions, int max_actions);

  int num_states() const noexcept { return joint_.num_states(); }
  int min_actions() const noexcept { return A_; }
  int max_actions() const noexcept { return B_; }
  int horizon() const noexcept { return joint_.horizon(); }
  int reward_dim() const noexcept { return joint_.reward_dim(); }
  int initial_state() const noexcept { return joint_.initial_state(); }
  int joint_action(int a, int b) const noexcept { return a * B_ + b; }

  const TabularVMDP& joint() const noexcept { return joint_; }

 private:
  TabularVMDP joint_;
  int A_, B_;
};

/// Joint policy with probability mu(a | h, s) * nu(b | h, s).
Policy product_policy(const Policy& mu, const Policy& nu);

/// V^{mu, nu}_1(s1)
Eigen::VectorXd exact_game_value(const TabularVMG& game, const Policy& mu, const Policy& nu);

/// Single-agent VMDP faced by the max-player when the min-player is fixed to mu.
TabularVMDP induced_max_player_model(const TabularVMG& game, const Policy& mu);
/// Single-agent VMDP faced by the min-player when the max-player is fixed to nu.
TabularVMDP induced_min_player_model(const TabularVMG& game, const Policy& nu);

struct NashPlan {
  Policy mu;
  Policy nu;
  /// V[h * S + s], last layer zero.
  std::vector<double> V;
  int num_states = 0;
  int initial_state = 0;
  double max_gap = 0.0;

  double initial_value() const { return V[static_cast<std::size_t>(initial_state)]; }
};

/// Backward induction solving one stage matrix game per (h, s).
/// `joint_model` is indexed by joint actions a * B + b; `reward` is flat (h, s, joint).
NashPlan nash_value_iteration(const TabularVMDP& joint_model, int min_actions, int max_actions,
                              std::span<const double> reward, const MatrixGameOptions& opts = {});

/// Exact Nash policies and value of the scalarized game G_theta.
NashPlan nash_plan(const TabularVMG& game, const Eigen::VectorXd& theta,
                   const MatrixGameOptions& opts = {});

/// V^{mu, dagger}_1(s1; theta): the max-player's best response to a fixed mu.
double best_response_to_min(const TabularVMG& game, const Policy& mu, const Eigen::VectorXd& theta);
/// V^{dagger, nu}_1(s1; theta): the min-player's best response to a fixed nu.
double best_response_to_max(const TabularVMG& game, const Policy& nu, const Eigen::VectorXd& theta);

/// Exploration statistics over joint actions.
struct EmpiricalGameModel {
  EmpiricalModel joint;
  int min_actions;
  int max_actions;
};

struct GameExploreResult {
  EmpiricalGameModel empirical;
  std::vector<ExploreLogEntry> log;
};

/// BonusConfig for games: iota = log(d S A B K H / delta).
BonusConfig make_game_bonus_config(const TabularVMG& game, std::int64_t episodes, double delta,
                                   double c_beta = 0.1);

/// VI-Zero over joint actions with joint greedy argmax (lexicographic ties).
GameExploreResult vi_zero_mg_explore(const TabularVMG& game, std::int64_t episodes,
                                     const BonusConfig& cfg, Rng& rng);

/// Planning phase: Nash value iteration on (P_hat^out, <theta, r_hat>).
class TabularGameRewardFree {
 public:
  TabularGameRewardFree(const EmpiricalGameModel& empirical, std::int64_t episodes,
                        MatrixGameOptions opts = {});

  NashPlan plan(const Eigen::VectorXd& theta) const;
  std::int64_t exploration_episodes() const noexcept { return episodes_; }
  const TabularVMDP& planning_model() const noexcept { return planning_; }

 private:
  TabularVMDP planning_;
  int A_, B_;
  std::int64_t episodes_;
  MatrixGameOptions opts_;
};

struct AdversaryContext {
  std::int64_t t;
  const Eigen::VectorXd& theta;
  /// Min-player policy of the previous iteration; nullptr at t = 1.
  const Policy* previous_mu;
};

/// Source of max-player policies; may depend on the full history.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual Policy next(const AdversaryContext& ctx) = 0;
};

class FixedAdversary final : public Adversary {
 public:
  explicit FixedAdversary(Policy nu) : nu_(std::move(nu)) {}
  Policy next(const AdversaryContext&) override { return nu_; }

 private:
  Policy nu_;
};

class UniformAdversary final : public Adversary {
 public:
  explicit UniformAdversary(const TabularVMG& game);
  Policy next(const AdversaryContext&) override { return nu_; }

 private:
  Policy nu_;
};

/// Plays argmax_nu <theta^t, V^{mu^{t-1}, nu}> on the true game (mu^0 uniform).
class BestResponseAdversary final : public Adversary {
 public:
  explicit BestResponseAdversary(const TabularVMG& game) : game_(game) {}
  Policy next(const AdversaryContext& ctx) override;

 private:
  const TabularVMG& game_;
};

struct GameApproachIteration {
  std::int64_t t;
  Eigen::VectorXd theta;
  Eigen::VectorXd v_hat;
  /// dist((1/t) sum_{i<=t} V^{mu^i, nu^i}_1(s1), C) with exact values.
  double running_distance;
  double max_gap;
};

struct GameApproachResult {
  std::vector<GameApproachIteration> log;
  std::vector<Policy> min_policies;
  Eigen::VectorXd average_value;
  std::int64_t exploration_episodes = 0;
  std::int64_t rollout_episodes = 0;
};

/// Meta-algorithm for games: the min-player plans a Nash policy for theta^t,
/// plays it against the adversary for one episode and takes an OGA step.
GameApproachResult run_approachability_mg(const TabularVMG& game,
                                          const TabularGameRewardFree& planner,
                                          const ConvexSet& set, const ApproachConfig& cfg,
                                          Adversary& adversary, Rng& rng);

}  // namespace approach
