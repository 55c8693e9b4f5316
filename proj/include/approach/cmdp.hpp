#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/approachability.hpp"
#include "approach/convex_set.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach {

/// Scale applied to augmented returns r (+) c so they stay in the unit ball.
inline constexpr double kAugmentScale = 0.70710678118654752440;

/// Model with returns (r_h(s, a) (+) c_h(s, a)) * kAugmentScale. The noise law
/// of the base model is applied to the scaled augmented mean.
struct AugmentedVMDP {
  TabularVMDP model;
  std::vector<double> cost;

  /// Undo the scaling of an augmented value vector.
  static Eigen::VectorXd unscale(const Eigen::VectorXd& v) { return v / kAugmentScale; }
};

/// cost is flat in (h, s, a) order with entries in [-1, 1]; otherwise InputError.
AugmentedVMDP augment(const TabularVMDP& model, std::span<const double> cost);

/// C^pi_1(s1) by backward recursion.
double exact_cost_value(const TabularVMDP& model, std::span<const double> cost,
                        const Policy& policy);
double exact_cost_value(const TabularVMDP& model, std::span<const double> cost,
                        const MixturePolicy& policy);

/// {x (+) y : x in C, -H <= y <= mid} in unscaled coordinates.
ConvexSet cost_target_set(const ConvexSet& base, int horizon, double mid);

enum class CostRange {
  /// [L, R] starts at [-H, H], the full range of achievable costs.
  kFull,
  /// [L, R] starts at [0, H].
  kNonnegative,
};

struct CmdpConfig {
  double epsilon = 0.5;
  double delta = 0.1;
  /// Exploration episodes for the augmented model (shared by all search steps).
  std::int64_t exploration_episodes = 10'000;
  /// Approachability iterations per search step.
  std::int64_t approach_iterations = 1'000;
  /// Constant in K_est = ceil(c H^2 log(d H / (eps delta)) / eps^2).
  double estimation_constant = 1.0;
  double c_beta = 0.1;
  CostRange range = CostRange::kFull;
  /// Search steps; 0 means ceil(log2(H / eps)).
  int search_iterations = 0;
};

struct CmdpSearchStep {
  int iteration;
  /// Interval at the start of the step.
  double L, R, mid;
  /// dist(v_bar, C_bar(mid)) in unscaled coordinates.
  double measured_distance;
  bool feasible;
};

struct CmdpResult {
  MixturePolicy policy;
  std::vector<CmdpSearchStep> log;
  double L = 0.0, R = 0.0;
  std::int64_t estimation_episodes_per_step = 0;
  std::int64_t total_episodes = 0;
};

std::int64_t estimation_episodes(int horizon, int reward_dim, double epsilon, double delta,
                                 double c);

/// Binary search on the cost threshold with approachability on the augmented model.
/// A step is feasible when dist(v_bar, C_bar) <= 2 * epsilon; the returned policy
/// is the last step's mixture.
CmdpResult solve_cmdp(const TabularVMDP& model, std::span<const double> cost,
                      const ConvexSet& set, const CmdpConfig& cfg, Rng& rng);

}  // namespace approach
