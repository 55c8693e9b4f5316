#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>

#include "approach/approachability.hpp"

namespace approach::testing {

Policy random_policy(int horizon, int num_states, int num_actions, Rng& rng) {
  std::vector<double> probs(static_cast<std::size_t>(horizon) * num_states * num_actions);
  for (std::size_t i = 0; i < probs.size(); i += num_actions) {
    double sum = 0.0;
    for (int a = 0; a < num_actions; ++a) {
      probs[i + a] = -std::log(1.0 - rng.uniform());
      sum += probs[i + a];
    }
    for (int a = 0; a < num_actions; ++a) probs[i + a] /= sum;
  }
  return Policy(horizon, num_states, num_actions, std::move(probs));
}

ConvexSet random_base_set(int dim, Rng& rng) {
  switch (rng.below(4)) {
    case 0:
      return ConvexSet(Ball{rng.in_ball(dim, 2.0), rng.uniform(0.05, 1.0)});
    case 1: {
      const Eigen::VectorXd c = rng.in_ball(dim, 2.0);
      Eigen::VectorXd half(dim);
      for (int i = 0; i < dim; ++i) half[i] = rng.uniform(0.0, 1.0);
      return ConvexSet(Box{c - half, c + half});
    }
    case 2: {
      HullOfPoints h;
      const int k = 1 + static_cast<int>(rng.below(6));
      const Eigen::VectorXd c = rng.in_ball(dim, 1.5);
      for (int i = 0; i < k; ++i) h.vertices.push_back(c + rng.in_ball(dim, 1.0));
      return ConvexSet(std::move(h));
    }
    default: {
      const Eigen::VectorXd c = rng.in_ball(dim, 2.0);
      const double radius = rng.uniform(0.1, 1.0);
      const Eigen::VectorXd n = rng.unit_vector(dim) * rng.uniform(0.5, 2.0);
      const double offset = n.dot(c) + n.norm() * radius * rng.uniform(-0.9, 1.2);
      return ConvexSet(HalfspaceCap{c, radius, n, offset});
    }
  }
}

ConvexSet random_set(int dim, Rng& rng) {
  if (dim >= 2 && rng.below(5) == 0) {
    const double lo = rng.uniform(-2.0, 1.0);
    return augment_set(random_base_set(dim - 1, rng), lo, lo + rng.uniform(0.0, 1.5));
  }
  return random_base_set(dim, rng);
}

double fenchel_grid_distance(const ConvexSet& set, const Eigen::VectorXd& x,
                             const std::vector<Eigen::VectorXd>& directions) {
  double best = 0.0;
  for (const auto& theta : directions) best = std::max(best, theta.dot(x) - support(set, theta));
  return best;
}

std::vector<Eigen::VectorXd> simplex_grid(int dim, int steps) {
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd p(dim);
  std::function<void(int, int)> rec = [&](int i, int remaining) {
    if (i == dim - 1) {
      p[i] = static_cast<double>(remaining) / steps;
      out.push_back(p);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      p[i] = static_cast<double>(k) / steps;
      rec(i + 1, remaining - k);
    }
  };
  rec(0, steps);
  return out;
}

namespace {

Eigen::VectorXd adversarial_return(int kind, std::int64_t t, const Eigen::VectorXd& theta,
                                   const ConvexSet& set, double H, Rng& rng) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / 97.0;
  switch (kind) {
    case 0:
      return rng.in_ball(2, H);
    case 1:
      return Eigen::Vector2d(t % 2 == 0 ? H : -H, 0.0);
    case 2:
      return H * rng.unit_vector(2);
    case 3:
      return H * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    case 4:
      // Pushes against the current direction.
      return theta.norm() > 0.0 ? Eigen::VectorXd(-H * theta / theta.norm())
                                : Eigen::VectorXd(H * Eigen::Vector2d(1.0, 0.0));
    case 5:
      // Sits on the far side of C relative to theta.
      return support_argmax(set, -theta);
    case 6:
      return Eigen::Vector2d(H * std::cos(angle), t < 50 ? H * std::sin(angle) : 0.0);
    case 7:
      return (t / 64) % 2 == 0 ? Eigen::VectorXd(H * Eigen::Vector2d(0.6, 0.8))
                               : Eigen::VectorXd(H * Eigen::Vector2d(-0.8, 0.0));
    case 8: {
      const Eigen::Vector2d perp(-theta[1], theta[0]);
      return perp.norm() > 0.0 ? Eigen::VectorXd(H * perp / perp.norm())
                               : Eigen::VectorXd(H * Eigen::Vector2d(0.0, 1.0));
    }
    default:
      return Eigen::Vector2d(H * (rng.uniform() < 0.7 ? 1.0 : -1.0), H * 0.1);
  }
}

}  // namespace

RegretMeasurement measure_oga_regret(const ConvexSet& set, int horizon, std::int64_t rounds,
                                     int kind, Rng& rng) {
  OgaState oga = OgaState::start(2, horizon);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  double learner = 0.0;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    const Eigen::VectorXd v = adversarial_return(kind, t, oga.theta, set, horizon, rng);
    learner += oga_utility(oga.theta, v, set);
    sum += v;
    oga = oga_update(oga, v, set);
  }
  const double T = static_cast<double>(rounds);
  double grid = -std::numeric_limits<double>::infinity();
  const int radii = 200, angles = 720;
  for (int i = 0; i <= radii; ++i)
    for (int j = 0; j < angles; ++j) {
      const double r = static_cast<double>(i) / radii, a = 2.0 * std::numbers::pi * j / angles;
      const Eigen::Vector2d th(r * std::cos(a), r * std::sin(a));
      grid = std::max(grid, th.dot(sum) - T * support(set, th));
      if (i == 0) break;
    }
  RegretMeasurement out;
  out.grid_best = grid;
  out.closed_form_best = T * distance(set, sum / T);
  out.regret = grid - learner;
  return out;
}

}  // namespace approach::testing
