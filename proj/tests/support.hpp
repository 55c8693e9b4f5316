#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "approach/convex_set.hpp"
#include "approach/rng.hpp"
#include "approach/vmdp.hpp"

namespace approach::testing {

/// Stochastic policy with Dirichlet(1)-like rows.
Policy random_policy(int horizon, int num_states, int num_actions, Rng& rng);

/// Ball, box, hull or cap in R^dim with bounded parameters.
ConvexSet random_base_set(int dim, Rng& rng);

/// random_base_set, or with probability 1/5 an augmented set over one of dimension dim - 1.
ConvexSet random_set(int dim, Rng& rng);

/// dist(x, C) via max over theta on a dense set of directions; never exceeds the true distance.
double fenchel_grid_distance(const ConvexSet& set, const Eigen::VectorXd& x,
                             const std::vector<Eigen::VectorXd>& directions);

/// Dense grid over the probability simplex with `steps` subdivisions per coordinate.
std::vector<Eigen::VectorXd> simplex_grid(int dim, int steps);

/// Number of adversarial return sequences understood by measure_oga_regret.
inline constexpr int kAdversaryKinds = 10;

struct RegretMeasurement {
  /// max over a polar grid of sum_t u^t(theta) minus sum_t u^t(theta^t).
  double regret = 0.0;
  /// The same comparator in closed form: T * dist(mean return, C).
  double closed_form_best = 0.0;
  double grid_best = 0.0;
};

/// Runs OGA in R^2 for T rounds against return sequence `kind` in B(H).
RegretMeasurement measure_oga_regret(const ConvexSet& set, int horizon, std::int64_t rounds,
                                     int kind, Rng& rng);

}  // namespace approach::testing
