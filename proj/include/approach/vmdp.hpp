#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/rng.hpp"

namespace approach {

/// Return-noise law. A sample at (h, s, a) with mean m is
///   (1 - level) * m + level * e,
/// where e is +m/|m| with probability (1 + |m|) / 2 and -m/|m| otherwise
/// (+-e_1 with equal probability when m = 0). E[e] = m, so the sample keeps
/// mean m and stays in the unit ball. level = 0 is the noiseless model.
struct NoiseLaw {
  double level = 0.0;
};

/// Ground-truth episodic VMDP with finite states and actions.
///
/// Transitions are stored flat in (h, s, a, s') order and mean returns as the
/// columns of a d x (H*S*A) matrix. All indices are 0-based.
class TabularVMDP {
 public:
  TabularVMDP(int num_states, int num_actions, int horizon, int reward_dim, int initial_state,
              std::vector<double> transitions, Eigen::MatrixXd mean_returns, NoiseLaw noise = {});

  int num_states() const noexcept { return S_; }
  int num_actions() const noexcept { return A_; }
  int horizon() const noexcept { return H_; }
  int reward_dim() const noexcept { return d_; }
  int initial_state() const noexcept { return s1_; }
  const NoiseLaw& noise() const noexcept { return noise_; }

  int sa_index(int h, int s, int a) const noexcept { return (h * S_ + s) * A_ + a; }
  int num_sa() const noexcept { return H_ * S_ * A_; }

  std::span<const double> transition(int h, int s, int a) const noexcept {
    return {transitions_.data() + static_cast<std::size_t>(sa_index(h, s, a)) * S_,
            static_cast<std::size_t>(S_)};
  }
  auto mean_return(int h, int s, int a) const { return mean_returns_.col(sa_index(h, s, a)); }

  const std::vector<double>& transitions() const noexcept { return transitions_; }
  const Eigen::MatrixXd& mean_returns() const noexcept { return mean_returns_; }

  /// Draws a return sample; consumes exactly one uniform draw when noisy.
  Eigen::VectorXd sample_return(int h, int s, int a, Rng& rng) const;

 private:
  int S_, A_, H_, d_, s1_;
  std::vector<double> transitions_;
  Eigen::MatrixXd mean_returns_;
  NoiseLaw noise_;
};

/// Time-indexed stochastic decision rule, stored flat in (h, s, a) order.
class Policy {
 public:
  Policy() = default;
  Policy(int horizon, int num_states, int num_actions, std::vector<double> probs);

  static Policy uniform(int horizon, int num_states, int num_actions);
  /// actions[h * S + s] is the action taken at (h, s).
  static Policy deterministic(int horizon, int num_states, int num_actions,
                              std::span<const int> actions);

  int horizon() const noexcept { return H_; }
  int num_states() const noexcept { return S_; }
  int num_actions() const noexcept { return A_; }

  double prob(int h, int s, int a) const noexcept { return probs_[index(h, s) + a]; }
  std::span<const double> distribution(int h, int s) const noexcept {
    return {probs_.data() + index(h, s), static_cast<std::size_t>(A_)};
  }
  std::span<double> distribution(int h, int s) noexcept {
    return {probs_.data() + index(h, s), static_cast<std::size_t>(A_)};
  }
  void set_action(int h, int s, int a) noexcept;

  const std::vector<double>& probabilities() const noexcept { return probs_; }

  bool operator==(const Policy&) const = default;

 private:
  std::size_t index(int h, int s) const noexcept {
    return (static_cast<std::size_t>(h) * S_ + s) * A_;
  }

  int H_ = 0, S_ = 0, A_ = 0;
  std::vector<double> probs_;
};

/// Mixture over policies: one component is drawn at the start of each episode.
struct MixturePolicy {
  std::vector<Policy> components;
  std::vector<double> weights;

  static MixturePolicy uniform(std::vector<Policy> components);
  void validate() const;
};

struct Step {
  int state;
  int action;
  Eigen::VectorXd ret;
  int next_state;
};

struct Trajectory {
  std::vector<Step> steps;
  /// Stream key and counter at the start of the episode.
  std::uint64_t rng_key = 0;
  std::uint64_t rng_counter = 0;

  Eigen::VectorXd return_sum() const;
};

/// One episode from s1. Per step the draws are: action, return noise, next state.
Trajectory sample_episode(const TabularVMDP& model, const Policy& policy, Rng& rng);
/// Draws the mixture component first, then samples an episode with it.
Trajectory sample_episode(const TabularVMDP& model, const MixturePolicy& policy, Rng& rng);

/// V_1^pi(s1) by backward recursion.
Eigen::VectorXd exact_policy_value(const TabularVMDP& model, const Policy& policy);
Eigen::VectorXd exact_policy_value(const TabularVMDP& model, const MixturePolicy& policy);

/// Occupancy measure q_h(s, a), flat in (h, s, a) order; sums to one per h.
std::vector<double> exact_occupancy(const TabularVMDP& model, const Policy& policy);

void check_compatible(const TabularVMDP& model, const Policy& policy);

}  // namespace approach
