#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "approach/reward_free.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach {

struct BonusConfig {
  double c_beta = 0.1;
  double delta = 0.1;
  /// log factor; see make_bonus_config.
  double iota = 1.0;
};

/// iota = log(d * S * A * K * H / delta). For games pass A * B as num_actions.
BonusConfig make_bonus_config(int reward_dim, int num_states, int num_actions,
                              std::int64_t episodes, int horizon, double delta,
                              double c_beta = 0.1);

/// c_beta * (sqrt(min{d,S} H^2 iota / max{t,1}) + H^2 S iota / max{t,1})
double bonus(std::int64_t t, const BonusConfig& cfg, int reward_dim, int num_states, int horizon);

/// Visit statistics collected during exploration.
///
/// Unvisited (h, s, a) are planned with a uniform next-state distribution and
/// zero return.
class EmpiricalModel {
 public:
  EmpiricalModel(int num_states, int num_actions, int horizon, int reward_dim, int initial_state);

  int num_states() const noexcept { return S_; }
  int num_actions() const noexcept { return A_; }
  int horizon() const noexcept { return H_; }
  int reward_dim() const noexcept { return d_; }
  int initial_state() const noexcept { return s1_; }
  int sa_index(int h, int s, int a) const noexcept { return (h * S_ + s) * A_ + a; }

  std::int64_t count(int h, int s, int a) const noexcept { return counts_[sa_index(h, s, a)]; }
  std::int64_t transition_count(int h, int s, int a, int next) const noexcept {
    return transition_counts_[static_cast<std::size_t>(sa_index(h, s, a)) * S_ + next];
  }
  /// Current P_hat_h(. | s, a).
  std::vector<double> p_hat(int h, int s, int a) const;
  /// Running mean of the observed return samples.
  Eigen::VectorXd r_hat(int h, int s, int a) const;

  void record(int h, int s, int a, const Eigen::VectorXd& ret, int next);
  /// Copies the whole current P_hat table as P_hat^out.
  void take_snapshot();
  bool has_snapshot() const noexcept { return !snapshot_.empty(); }
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }

  /// (P_hat^out, r_hat) as a noiseless model for planning. Falls back to the
  /// current P_hat when no snapshot was taken.
  TabularVMDP planning_model() const;

  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  const std::vector<std::int64_t>& transition_counts() const noexcept { return transition_counts_; }
  const Eigen::MatrixXd& return_sums() const noexcept { return return_sums_; }

  /// Rebuilds a model from serialized statistics (see io.hpp).
  static EmpiricalModel restore(int num_states, int num_actions, int horizon, int reward_dim,
                                int initial_state, std::vector<std::int64_t> transition_counts,
                                Eigen::MatrixXd return_sums, std::vector<double> snapshot);

 private:
  int S_, A_, H_, d_, s1_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> transition_counts_;
  Eigen::MatrixXd return_sums_;
  std::vector<double> snapshot_;
};

struct ExploreLogEntry {
  std::int64_t episode;
  double v_tilde;
  double delta;
};

struct ExploreResult {
  EmpiricalModel empirical;
  std::vector<ExploreLogEntry> log;
  /// Episode (1-based) at which P_hat^out was last taken.
  std::int64_t snapshot_episode = 0;
};

/// VI-Zero exploration. Delta starts at +infinity so the first episode always
/// snapshots; afterwards P_hat^out tracks argmin_k V_tilde^k_1(s1).
ExploreResult vi_zero_explore(const TabularVMDP& model, std::int64_t episodes,
                              const BonusConfig& cfg, Rng& rng);

/// Greedy policy of the scalarized empirical model. Throws InputError for |theta| > 1.
Policy rfe_plan(const EmpiricalModel& empirical, const Eigen::VectorXd& theta);

/// Planning phase over a frozen empirical model.
class TabularRewardFree final : public RewardFreePlanner {
 public:
  TabularRewardFree(EmpiricalModel empirical, std::int64_t episodes);

  Policy plan(const Eigen::VectorXd& theta) const override;
  std::int64_t exploration_episodes() const override { return episodes_; }
  const EmpiricalModel& empirical() const noexcept { return empirical_; }
  const TabularVMDP& planning_model() const noexcept { return planning_; }

 private:
  EmpiricalModel empirical_;
  TabularVMDP planning_;
  std::int64_t episodes_;
};

}  // namespace approach
