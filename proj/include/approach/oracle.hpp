#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "approach/convex_set.hpp"
#include "approach/vmdp.hpp"
#include "approach/vmg.hpp"

namespace approach {

// Reference solvers over the value polytope conv{V_1^pi(s1) : pi deterministic}.

/// A vertex of the value polytope together with the policy attaining it.
struct Vertex {
  Eigen::VectorXd value;
  Policy policy;
};

/// Vertex minimizing <g, v>. Throws InputError for g = 0.
Vertex lmo(const TabularVMDP& model, const Eigen::VectorXd& g);

struct FwOptions {
  /// Stop once the Frank-Wolfe gap is at most tol^2.
  double tol = 1e-4;
  std::int64_t max_iterations = 200'000;
};

struct DistanceResult {
  double distance = 0.0;
  /// Exact value of the witness mixture.
  Eigen::VectorXd value;
  MixturePolicy witness;
  double gap = 0.0;
  std::int64_t iterations = 0;
  /// Squared distance after every iteration.
  std::vector<double> objective;
};

/// min_pi dist(V_1^pi(s1), C) by pairwise Frank-Wolfe over the value polytope.
/// Throws ConvergenceError when max_iterations is reached.
DistanceResult min_distance_fw(const TabularVMDP& model, const ConvexSet& set,
                               const FwOptions& opts = {});

/// The same solver with an arbitrary linear minimization oracle.
using VertexOracle = std::function<Vertex(const Eigen::VectorXd&)>;
DistanceResult min_distance_fw(const VertexOracle& oracle, int dim, const ConvexSet& set,
                               const FwOptions& opts = {});

/// Default bound on the number of deterministic policies for exhaustive routines.
inline constexpr std::uint64_t kEnumerationLimit = 1u << 16;

/// Number of deterministic policies A^(S*H), saturating at UINT64_MAX.
std::uint64_t deterministic_policy_count(int num_states, int num_actions, int horizon);

/// Policy number `index` in mixed-radix order: digit h * S + s is the action at (h, s).
Policy deterministic_policy(int horizon, int num_states, int num_actions, std::uint64_t index);

/// Values of all deterministic policies; SizeError above `limit`.
std::vector<Vertex> enumerate_vertices(const TabularVMDP& model,
                                       std::uint64_t limit = kEnumerationLimit);

/// Vertices with identical values collapsed to the first occurrence.
std::vector<Vertex> distinct_vertices(std::vector<Vertex> vertices);

struct ExhaustiveOptions {
  /// Grid points per hull edge before refinement (d = 2).
  int grid = 1000;
  std::uint64_t limit = kEnumerationLimit;
};

/// min_pi dist(V_1^pi(s1), C) from the enumerated vertices. For d = 2 the hull
/// boundary is scanned on a dense grid and refined; otherwise alternating
/// projections between the hull and C are used.
double min_distance_exhaustive(const TabularVMDP& model, const ConvexSet& set,
                               const ExhaustiveOptions& opts = {});

/// Counter-clockwise convex hull of 2-D points (monotone chain), no repeated points.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> points);

struct ConstrainedOptions {
  double tol = 1e-4;
  std::int64_t max_iterations = 200'000;
  double initial_penalty = 1.0;
  double penalty_growth = 4.0;
  int max_rounds = 40;
};

struct ConstrainedResult {
  bool feasible = false;
  /// Optimal cost (feasible) or NaN.
  double cost = 0.0;
  /// Value and constraint distance of the witness.
  Eigen::VectorXd value;
  double distance = 0.0;
  MixturePolicy witness;
};

/// min_pi C^pi_1(s1) s.t. V^pi_1(s1) in C by penalized Frank-Wolfe on
/// cost + lambda dist^2 with increasing lambda. Infeasible instances report
/// feasible = false and the minimum distance.
ConstrainedResult constrained_optimum(const TabularVMDP& model, std::span<const double> cost,
                                      const ConvexSet& set, const ConstrainedOptions& opts = {});

/// Enumeration-based reference: bisection on the cost level, each level
/// checked by Frank-Wolfe over the explicit vertex list. Requires S * H <= 12.
ConstrainedResult constrained_optimum_exhaustive(const TabularVMDP& model,
                                                 std::span<const double> cost,
                                                 const ConvexSet& set,
                                                 const ConstrainedOptions& opts = {});

/// Brackets for Q = max_theta [V*(theta) - h_C(theta)], the distance the
/// min-player can approach against any adversary. Q lies between
/// max_nu min_mu dist(V^{mu,nu}_1(s1), C) and min_mu max_nu dist(V^{mu,nu}_1(s1), C).
struct MinimaxBrackets {
  /// Larger of max over deterministic nu of min_mu dist and the grid maximum.
  double lower = 0.0;
  /// max over the theta grid of [V*(theta) - h_C(theta)] plus a Lipschitz slack.
  double upper = 0.0;
  /// Grid maximum without slack.
  double grid_value = 0.0;
};

struct MinimaxOptions {
  FwOptions fw;
  /// Grid points per face edge of the cube used to cover the unit sphere.
  int theta_grid = 64;
  std::uint64_t max_player_limit = 1u << 10;
};

/// Brackets Q; `upper` also bounds max_nu min_mu dist(V^{mu,nu}_1(s1), C).
MinimaxBrackets minimax_distance(const TabularVMG& game, const ConvexSet& set,
                                 const MinimaxOptions& opts = {});

/// Unit vectors from a regular grid on the faces of [-1, 1]^d, and the radius
/// within which they cover the sphere.
struct SphereGrid {
  std::vector<Eigen::VectorXd> points;
  double covering_radius;
};
SphereGrid sphere_grid(int dim, int per_edge);

}  // namespace approach
