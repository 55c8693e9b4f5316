#include "approach/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "approach/cmdp.hpp"
#include "approach/errors.hpp"
#include "approach/planner.hpp"

namespace approach {
namespace {

// Objective F(z) = <lin, z> + penalty * dist(z.head(d), C)^2 over conv(vertices).
struct Objective {
  const ConvexSet& set;
  int set_dim;
  Eigen::VectorXd lin;
  double penalty;

  double value(const Eigen::VectorXd& z) const {
    const double dist = distance(set, z.head(set_dim));
    return lin.dot(z) + penalty * dist * dist;
  }
};

struct ActiveSet {
  std::vector<Vertex> atoms;
  std::vector<double> weights;
  Eigen::VectorXd z;

  void recompute() {
    z.setZero();
    for (std::size_t i = 0; i < atoms.size(); ++i) z += weights[i] * atoms[i].value;
  }
};

struct FwOutcome {
  double gap = 0.0;
  std::int64_t iterations = 0;
};

// Pairwise Frank-Wolfe. The step minimizes the quadratic majorizer
// <lin, z + g d> + penalty |x + g d_x - p|^2 with p = P_C(x) fixed, so the
// objective never increases.
FwOutcome pairwise_fw(const VertexOracle& oracle, const Objective& obj, ActiveSet& act,
                      double gap_tol, std::int64_t max_iterations, std::vector<double>* trace) {
  const int d = obj.set_dim;
  FwOutcome out;
  Eigen::VectorXd grad(act.z.size());
  for (std::int64_t it = 1;; ++it) {
    if (it % 256 == 0) act.recompute();
    const Eigen::VectorXd x = act.z.head(d);
    const Eigen::VectorXd resid = x - project(obj.set, x);
    grad = obj.lin;
    grad.head(d) += 2.0 * obj.penalty * resid;

    if (grad.squaredNorm() == 0.0) {
      out.gap = 0.0;
      out.iterations = it - 1;
      return out;
    }
    Vertex s = oracle(grad);
    out.gap = grad.dot(act.z - s.value);
    if (out.gap <= gap_tol) {
      out.iterations = it - 1;
      return out;
    }
    if (it > max_iterations)
      throw ConvergenceError("Frank-Wolfe iteration cap reached", out.gap);

    std::size_t away = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < act.atoms.size(); ++i) {
      const double val = grad.dot(act.atoms[i].value);
      if (val > worst) {
        worst = val;
        away = i;
      }
    }
    const Eigen::VectorXd dir = s.value - act.atoms[away].value;
    const Eigen::VectorXd dir_x = dir.head(d);
    const double dir_lin = obj.lin.dot(dir);
    const double quad = obj.penalty * dir_x.squaredNorm();
    const double slope = dir_lin + 2.0 * obj.penalty * resid.dot(dir_x);
    const double gmax = act.weights[away];
    double step;
    if (quad > 0.0)
      step = std::clamp(-slope / (2.0 * quad), 0.0, gmax);
    else
      step = slope < 0.0 ? gmax : 0.0;
    if (step <= 0.0) {
      // The pairwise direction stalls only when s already carries the away
      // atom's score; fall back to a plain Frank-Wolfe step.
      const Eigen::VectorXd fdir = s.value - act.z;
      const Eigen::VectorXd fdir_x = fdir.head(d);
      const double fq = obj.penalty * fdir_x.squaredNorm();
      const double fs = obj.lin.dot(fdir) + 2.0 * obj.penalty * resid.dot(fdir_x);
      double fstep = fq > 0.0 ? std::clamp(-fs / (2.0 * fq), 0.0, 1.0) : (fs < 0.0 ? 1.0 : 0.0);
      if (fstep <= 0.0) {
        out.iterations = it;
        return out;
      }
      for (double& w : act.weights) w *= 1.0 - fstep;
      auto found = std::find_if(act.atoms.begin(), act.atoms.end(),
                                [&](const Vertex& v) { return v.policy == s.policy; });
      if (found == act.atoms.end()) {
        act.atoms.push_back(std::move(s));
        act.weights.push_back(fstep);
      } else {
        act.weights[static_cast<std::size_t>(found - act.atoms.begin())] += fstep;
      }
      act.z += fstep * fdir;
    } else {
      auto found = std::find_if(act.atoms.begin(), act.atoms.end(),
                                [&](const Vertex& v) { return v.policy == s.policy; });
      if (found == act.atoms.end()) {
        act.atoms.push_back(std::move(s));
        act.weights.push_back(step);
      } else {
        act.weights[static_cast<std::size_t>(found - act.atoms.begin())] += step;
      }
      act.weights[away] -= step;
      act.z += step * dir;
      if (step >= gmax) {
        act.atoms.erase(act.atoms.begin() + static_cast<std::ptrdiff_t>(away));
        act.weights.erase(act.weights.begin() + static_cast<std::ptrdiff_t>(away));
        act.recompute();
      }
    }
    if (trace != nullptr) trace->push_back(obj.value(act.z));
  }
}

ActiveSet start_active(const VertexOracle& oracle, int dim) {
  ActiveSet act;
  Eigen::VectorXd g = Eigen::VectorXd::Ones(dim);
  act.atoms.push_back(oracle(g));
  act.weights.push_back(1.0);
  act.z = act.atoms.front().value;
  return act;
}

MixturePolicy witness_of(const ActiveSet& act) {
  MixturePolicy mix;
  double total = 0.0;
  for (double w : act.weights) total += w;
  for (std::size_t i = 0; i < act.atoms.size(); ++i) {
    mix.components.push_back(act.atoms[i].policy);
    mix.weights.push_back(act.weights[i] / total);
  }
  return mix;
}

VertexOracle list_oracle(const std::vector<Vertex>& vertices) {
  return [&vertices](const Eigen::VectorXd& g) {
    std::size_t best = 0;
    double best_val = g.dot(vertices[0].value);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      const double v = g.dot(vertices[i].value);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    return vertices[best];
  };
}

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_min_distance(const ConvexSet& set, const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                            int grid) {
  auto f = [&](double t) {
    const Eigen::VectorXd x = (1.0 - t) * p + t * q;
    return distance(set, x);
  };
  int best = 0;
  double best_val = f(0.0);
  for (int j = 1; j <= grid; ++j) {
    const double v = f(static_cast<double>(j) / grid);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  // dist(., C) is convex along the segment, so golden-section search around
  // the best grid point finds the minimum.
  double lo = std::max(0, best - 1) / static_cast<double>(grid);
  double hi = std::min(grid, best + 1) / static_cast<double>(grid);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = f(b);
    }
  }
  return std::min({best_val, fa, fb});
}

bool inside_polygon(const std::vector<Eigen::Vector2d>& hull, const Eigen::Vector2d& x) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[i], hull[(i + 1) % hull.size()], x) < 0.0) return false;
  return true;
}

}  // namespace

Vertex lmo(const TabularVMDP& model, const Eigen::VectorXd& g) {
  if (g.size() != model.reward_dim()) throw InputError("lmo direction has the wrong dimension");
  const double n = g.norm();
  if (!(n > 0.0)) throw InputError("lmo direction must be nonzero");
  const Eigen::VectorXd theta = -g / n;
  PlanResult plan = value_iteration(model, scalarize(model, theta));
  return Vertex{exact_policy_value(model, plan.policy), std::move(plan.policy)};
}

DistanceResult min_distance_fw(const VertexOracle& oracle, int dim, const ConvexSet& set,
                               const FwOptions& opts) {
  if (!(opts.tol > 0.0)) throw InputError("tolerance must be positive");
  if (set.dim() != dim) throw ConfigError("target set dimension mismatch", "set");
  ActiveSet act = start_active(oracle, dim);
  const Objective obj{set, dim, Eigen::VectorXd::Zero(dim), 1.0};
  DistanceResult res;
  res.objective.push_back(obj.value(act.z));
  const FwOutcome fw = pairwise_fw(oracle, obj, act, opts.tol * opts.tol, opts.max_iterations,
                                   &res.objective);
  act.recompute();
  res.value = act.z;
  res.distance = distance(set, act.z);
  res.witness = witness_of(act);
  res.gap = fw.gap;
  res.iterations = fw.iterations;
  return res;
}

DistanceResult min_distance_fw(const TabularVMDP& model, const ConvexSet& set,
                               const FwOptions& opts) {
  const VertexOracle oracle = [&model](const Eigen::VectorXd& g) { return lmo(model, g); };
  DistanceResult res = min_distance_fw(oracle, model.reward_dim(), set, opts);
  res.value = exact_policy_value(model, res.witness);
  res.distance = distance(set, res.value);
  return res;
}

std::uint64_t deterministic_policy_count(int num_states, int num_actions, int horizon) {
  std::uint64_t n = 1;
  const auto a = static_cast<std::uint64_t>(num_actions);
  for (int i = 0; i < num_states * horizon; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / a)
      return std::numeric_limits<std::uint64_t>::max();
    n *= a;
  }
  return n;
}

Policy deterministic_policy(int horizon, int num_states, int num_actions, std::uint64_t index) {
  std::vector<int> actions(static_cast<std::size_t>(horizon) * num_states);
  for (int& a : actions) {
    a = static_cast<int>(index % static_cast<std::uint64_t>(num_actions));
    index /= static_cast<std::uint64_t>(num_actions);
  }
  return Policy::deterministic(horizon, num_states, num_actions, actions);
}

std::vector<Vertex> enumerate_vertices(const TabularVMDP& model, std::uint64_t limit) {
  const std::uint64_t n =
      deterministic_policy_count(model.num_states(), model.num_actions(), model.horizon());
  if (n > limit) throw SizeError("too many deterministic policies to enumerate");
  std::vector<Vertex> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Policy pi = deterministic_policy(model.horizon(), model.num_states(), model.num_actions(), i);
    out.push_back({exact_policy_value(model, pi), std::move(pi)});
  }
  return out;
}

std::vector<Vertex> distinct_vertices(std::vector<Vertex> vertices) {
  std::vector<Vertex> out;
  for (Vertex& v : vertices) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Vertex& u) { return (u.value - v.value).norm() == 0.0; });
    if (!seen) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double min_distance_exhaustive(const TabularVMDP& model, const ConvexSet& set,
                               const ExhaustiveOptions& opts) {
  if (set.dim() != model.reward_dim()) throw ConfigError("target set dimension mismatch", "set");
  const std::vector<Vertex> verts = distinct_vertices(enumerate_vertices(model, opts.limit));
  if (model.reward_dim() == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (const Vertex& v : verts) pts.emplace_back(v.value[0], v.value[1]);
    const std::vector<Eigen::Vector2d> hull = convex_hull_2d(std::move(pts));
    if (hull.size() == 1) return distance(set, Eigen::VectorXd(hull[0]));
    const Eigen::VectorXd c = canonical_point(set);
    if (inside_polygon(hull, Eigen::Vector2d(c[0], c[1]))) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t edges = hull.size() == 2 ? 1 : hull.size();
    for (std::size_t i = 0; i < edges; ++i)
      best = std::min(best, segment_min_distance(set, hull[i], hull[(i + 1) % hull.size()], opts.grid));
    return best;
  }
  std::vector<Eigen::VectorXd> pts;
  for (const Vertex& v : verts) pts.push_back(v.value);
  Eigen::VectorXd x = pts.front();
  for (int it = 0; it < 100'000; ++it) {
    const Eigen::VectorXd y = project(set, x);
    const Eigen::VectorXd next = project_onto_hull(pts, y);
    const double moved = (next - x).norm();
    x = next;
    if (moved <= 1e-13) break;
  }
  return distance(set, x);
}

ConstrainedResult constrained_optimum(const TabularVMDP& model, std::span<const double> cost,
                                      const ConvexSet& set, const ConstrainedOptions& opts) {
  if (set.dim() != model.reward_dim()) throw ConfigError("target set dimension mismatch", "set");
  const FwOptions fw_opts{opts.tol * 1e-2, opts.max_iterations};
  const DistanceResult feas = min_distance_fw(model, set, fw_opts);
  ConstrainedResult res;
  if (feas.distance > opts.tol) {
    res.feasible = false;
    res.cost = std::numeric_limits<double>::quiet_NaN();
    res.value = feas.value;
    res.distance = feas.distance;
    res.witness = feas.witness;
    return res;
  }

  const int d = model.reward_dim();
  const AugmentedVMDP aug = augment(model, cost);
  const VertexOracle oracle = [&aug](const Eigen::VectorXd& g) {
    Vertex v = lmo(aug.model, g);
    v.value = AugmentedVMDP::unscale(v.value);
    return v;
  };
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(d + 1);
  lin[d] = 1.0;
  ActiveSet act = start_active(oracle, d + 1);
  double penalty = opts.initial_penalty;
  for (int round = 0; round < opts.max_rounds; ++round) {
    const Objective obj{set, d, lin, penalty};
    pairwise_fw(oracle, obj, act, opts.tol * opts.tol, opts.max_iterations, nullptr);
    act.recompute();
    if (distance(set, act.z.head(d)) <= opts.tol) break;
    penalty *= opts.penalty_growth;
  }
  res.witness = witness_of(act);
  res.value = exact_policy_value(model, res.witness);
  res.distance = distance(set, res.value);
  res.cost = exact_cost_value(model, cost, res.witness);
  res.feasible = true;
  return res;
}

ConstrainedResult constrained_optimum_exhaustive(const TabularVMDP& model,
                                                 std::span<const double> cost,
                                                 const ConvexSet& set,
                                                 const ConstrainedOptions& opts) {
  if (set.dim() != model.reward_dim()) throw ConfigError("target set dimension mismatch", "set");
  if (model.num_states() * model.horizon() > 12)
    throw SizeError("exhaustive constrained optimum needs S * H <= 12");
  if (cost.size() != static_cast<std::size_t>(model.num_sa()))
    throw InputError("cost table has the wrong size");
  const int d = model.reward_dim();
  std::vector<Vertex> verts;
  for (Vertex& v : enumerate_vertices(model)) {
    Eigen::VectorXd z(d + 1);
    z.head(d) = v.value;
    z[d] = evaluate_scalar(model, cost, v.policy);
    verts.push_back({std::move(z), std::move(v.policy)});
  }
  verts = distinct_vertices(std::move(verts));
  const VertexOracle oracle = list_oracle(verts);
  const FwOptions fw_opts{opts.tol * 1e-2, opts.max_iterations};
  const double floor = -static_cast<double>(model.horizon()) - 1.0;

  auto check = [&](double level) {
    const ConvexSet target = augment_set(set, floor, level);
    return min_distance_fw(oracle, d + 1, target, fw_opts);
  };

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Vertex& v : verts) {
    lo = std::min(lo, v.value[d]);
    hi = std::max(hi, v.value[d]);
  }
  DistanceResult best = check(hi);
  ConstrainedResult res;
  if (best.distance > opts.tol) {
    res.feasible = false;
    res.cost = std::numeric_limits<double>::quiet_NaN();
    res.value = best.value.head(d);
    res.distance = distance(set, res.value);
    res.witness = best.witness;
    return res;
  }
  DistanceResult at_lo = check(lo);
  if (at_lo.distance <= opts.tol) {
    best = std::move(at_lo);
    hi = lo;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    DistanceResult r = check(mid);
    if (r.distance <= opts.tol) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  res.feasible = true;
  res.witness = best.witness;
  res.value = exact_policy_value(model, res.witness);
  res.distance = distance(set, res.value);
  res.cost = exact_cost_value(model, cost, res.witness);
  return res;
}

SphereGrid sphere_grid(int dim, int per_edge) {
  if (dim < 1 || per_edge < 1) throw InputError("sphere grid needs positive sizes");
  SphereGrid grid;
  const int free = dim - 1;
  std::uint64_t cells = 1;
  for (int i = 0; i < free; ++i) cells *= static_cast<std::uint64_t>(per_edge);
  for (int axis = 0; axis < dim; ++axis)
    for (int sign = -1; sign <= 1; sign += 2)
      for (std::uint64_t c = 0; c < cells; ++c) {
        Eigen::VectorXd x(dim);
        x[axis] = sign;
        std::uint64_t rest = c;
        for (int j = 0, k = 0; j < dim; ++j) {
          if (j == axis) continue;
          const auto digit = static_cast<int>(rest % static_cast<std::uint64_t>(per_edge));
          rest /= static_cast<std::uint64_t>(per_edge);
          x[j] = -1.0 + (2.0 * digit + 1.0) / per_edge;
          ++k;
        }
        grid.points.push_back(x.normalized());
      }
  grid.covering_radius = std::sqrt(static_cast<double>(free)) / per_edge;
  return grid;
}

MinimaxBrackets minimax_distance(const TabularVMG& game, const ConvexSet& set,
                                 const MinimaxOptions& opts) {
  if (set.dim() != game.reward_dim()) throw ConfigError("target set dimension mismatch", "set");
  const std::uint64_t n_nu =
      deterministic_policy_count(game.num_states(), game.max_actions(), game.horizon());
  if (n_nu > opts.max_player_limit) throw SizeError("too many max-player policies to enumerate");

  MinimaxBrackets out;
  double lower = 0.0;
  for (std::uint64_t i = 0; i < n_nu; ++i) {
    const Policy nu =
        deterministic_policy(game.horizon(), game.num_states(), game.max_actions(), i);
    const TabularVMDP m = induced_min_player_model(game, nu);
    lower = std::max(lower, min_distance_fw(m, set, opts.fw).distance);
  }

  double grid_max = 0.0;
  const SphereGrid grid = sphere_grid(game.reward_dim(), opts.theta_grid);
  for (const Eigen::VectorXd& theta : grid.points)
    grid_max = std::max(grid_max, nash_plan(game, theta).initial_value() - support(set, theta));
  out.grid_value = grid_max;
  out.lower = std::max(lower, grid_max);
  out.upper = grid_max + (game.horizon() + max_norm(set)) * grid.covering_radius;
  return out;
}

}  // namespace approach
