#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/vmdp.hpp"

namespace approach {

/// The scalar MDP with reward <theta, r>. Requires |theta| <= 1 + 1e-9.
struct ScalarizedView {
  ScalarizedView(const TabularVMDP& model, Eigen::VectorXd theta);

  const TabularVMDP& model;
  Eigen::VectorXd theta;
};

struct PlanResult {
  int horizon = 0, num_states = 0, num_actions = 0;
  /// V[h * S + s] for h in [0, H]; the last layer is zero.
  std::vector<double> V;
  /// Q[(h * S + s) * A + a]
  std::vector<double> Q;
  /// Greedy deterministic policy, ties to the lowest action index.
  Policy policy;
  int initial_state = 0;

  double value(int h, int s) const { return V[static_cast<std::size_t>(h) * num_states + s]; }
  double initial_value() const { return value(0, initial_state); }
};

/// <theta, r_h(s, a)> flat in (h, s, a) order.
std::vector<double> scalarize(const TabularVMDP& model, const Eigen::VectorXd& theta);

/// Backward induction for an arbitrary scalar reward table.
PlanResult value_iteration(const TabularVMDP& model, std::span<const double> reward);
PlanResult value_iteration(const ScalarizedView& view);

/// <theta, V_1^pi(s1)>
double scalarized_policy_value(const ScalarizedView& view, const Policy& policy);

/// Exact value of a policy under a scalar reward table.
double evaluate_scalar(const TabularVMDP& model, std::span<const double> reward, const Policy& policy);

}  // namespace approach
