#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "approach/reward_free.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach {

/// Linear VMDP instantiated on a finite state space.
///
/// P_h(s' | s, a) = <mu_h.row(s'), phi(s, a)> and r_h(s, a) = W_h phi(s, a).
/// Features are h-independent and stored as the rows of an (S*A) x d_lin table.
class LinearVMDP {
 public:
  /// Builds the tabular ground truth from the factors and validates it.
  LinearVMDP(int num_states, int num_actions, int horizon, int initial_state,
             Eigen::MatrixXd features, std::vector<Eigen::MatrixXd> mu,
             std::vector<Eigen::MatrixXd> W, NoiseLaw noise = {});

  const TabularVMDP& tabular() const noexcept { return tabular_; }
  int feature_dim() const noexcept { return static_cast<int>(features_.cols()); }
  int num_states() const noexcept { return tabular_.num_states(); }
  int num_actions() const noexcept { return tabular_.num_actions(); }
  int horizon() const noexcept { return tabular_.horizon(); }
  int reward_dim() const noexcept { return tabular_.reward_dim(); }

  auto phi(int s, int a) const { return features_.row(s * num_actions() + a).transpose(); }
  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const std::vector<Eigen::MatrixXd>& mu() const noexcept { return mu_; }
  const std::vector<Eigen::MatrixXd>& W() const noexcept { return W_; }

 private:
  Eigen::MatrixXd features_;
  std::vector<Eigen::MatrixXd> mu_;
  std::vector<Eigen::MatrixXd> W_;
  TabularVMDP tabular_;
};

/// One-hot features phi(s, a) = e_{s*A + a}; the factors reproduce `model` exactly.
LinearVMDP one_hot_linear(const TabularVMDP& model);

/// Lambda = I + sum phi phi^T with an incrementally maintained inverse.
class GramState {
 public:
  static constexpr int kReinvertEvery = 512;

  explicit GramState(int dim);

  /// Rank-one update; every kReinvertEvery updates the inverse is recomputed by Cholesky.
  void add(const Eigen::VectorXd& phi);

  const Eigen::MatrixXd& matrix() const noexcept { return lambda_; }
  const Eigen::MatrixXd& inverse() const noexcept { return inverse_; }
  std::int64_t updates() const noexcept { return updates_; }
  /// max |Lambda * Lambda^{-1} - I|
  double drift() const;

 private:
  void reinvert();

  Eigen::MatrixXd lambda_;
  Eigen::MatrixXd inverse_;
  std::int64_t updates_ = 0;
};

/// min{beta * sqrt(phi^T Lambda^{-1} phi), H}. Throws NumericalError if the
/// quadratic form is negative or not finite.
double elliptical_bonus(const Eigen::MatrixXd& lambda_inv, const Eigen::VectorXd& phi, double beta,
                        double horizon);

/// beta = c_beta * d_lin * H * sqrt(iota), iota = log(d_lin * d * K * H / delta).
double linear_beta(int feature_dim, int reward_dim, std::int64_t episodes, int horizon,
                   double delta, double c_beta = 0.1);

struct LinearSample {
  int h;
  int state;
  int action;
  int next_state;
  Eigen::VectorXd ret;
};

/// Exploration data: transitions with their return samples.
struct LinearDataset {
  int num_states = 0, num_actions = 0, horizon = 0, reward_dim = 0, initial_state = 0;
  Eigen::MatrixXd features;
  std::vector<LinearSample> samples;
};

struct LinearExploreResult {
  LinearDataset dataset;
  /// Lambda_tilde_h after the last episode.
  std::vector<GramState> gram;
  /// V_tilde_1(s1) per episode.
  std::vector<double> v_tilde;
};

/// Least-squares value iteration on the exploration reward r_tilde = u_tilde / H.
LinearExploreResult linear_explore(const LinearVMDP& model, std::int64_t episodes, double beta,
                                   Rng& rng);

struct LinearPlan {
  Policy policy;
  /// V_hat[h * S + s], last layer zero.
  std::vector<double> V;
  int num_states = 0;
  int initial_state = 0;

  double initial_value() const { return V[static_cast<std::size_t>(initial_state)]; }
};

/// Planning over a frozen dataset.
class LinearRewardFree final : public RewardFreePlanner {
 public:
  LinearRewardFree(LinearDataset dataset, double beta, std::int64_t episodes);

  LinearPlan plan_values(const Eigen::VectorXd& theta) const;
  Policy plan(const Eigen::VectorXd& theta) const override { return plan_values(theta).policy; }
  std::int64_t exploration_episodes() const override { return episodes_; }

  const Eigen::MatrixXd& gram(int h) const { return lambda_[static_cast<std::size_t>(h)]; }

 private:
  LinearDataset data_;
  double beta_;
  std::int64_t episodes_;
  std::vector<Eigen::MatrixXd> lambda_;
  /// Lambda_hat_h^{-1} phi(s, a) for every (s, a), one S*A x d_lin block per h.
  std::vector<Eigen::MatrixXd> solved_features_;
  /// bonus u_hat_h(s, a)
  std::vector<double> bonus_;
  /// Visit counts n_h(s, a, s') and return sums per (h, s, a).
  std::vector<std::int64_t> transition_counts_;
  Eigen::MatrixXd return_sums_;
};

/// Q_hat = clamp(w_hat^T phi + u_hat, -H, H), greedy ties to the lowest action.
/// Throws InputError when the dataset is empty or |theta| > 1.
LinearPlan linear_plan(const LinearDataset& dataset, const Eigen::VectorXd& theta, double beta);

}  // namespace approach
