#include "approach/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "approach/errors.hpp"

namespace approach {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int validate(const ConvexSet::Shape& shape) {
  return std::visit(
      Overloaded{
          [](const Ball& b) {
            if (b.center.size() == 0) throw ConfigError("ball center is empty", "center");
            if (!(b.radius > 0.0)) throw ConfigError("ball radius must be positive", "radius");
            return static_cast<int>(b.center.size());
          },
          [](const Box& b) {
            if (b.lower.size() == 0 || b.lower.size() != b.upper.size())
              throw ConfigError("box bounds have mismatched dimensions", "lower");
            if ((b.lower.array() > b.upper.array()).any())
              throw ConfigError("box lower bound exceeds upper bound", "lower");
            return static_cast<int>(b.lower.size());
          },
          [](const HullOfPoints& h) {
            if (h.vertices.empty()) throw ConfigError("hull has no vertices", "vertices");
            const auto d = h.vertices.front().size();
            if (d == 0) throw ConfigError("hull vertices are empty", "vertices");
            for (const auto& v : h.vertices)
              if (v.size() != d) throw ConfigError("hull vertices differ in dimension", "vertices");
            return static_cast<int>(d);
          },
          [](const HalfspaceCap& c) {
            if (c.center.size() == 0 || c.center.size() != c.normal.size())
              throw ConfigError("cap center and normal differ in dimension", "normal");
            if (!(c.radius > 0.0)) throw ConfigError("cap radius must be positive", "radius");
            const double an = c.normal.norm();
            if (!(an > 0.0)) throw ConfigError("cap normal must be nonzero", "normal");
            if (c.normal.dot(c.center) - c.radius * an > c.offset)
              throw ConfigError("cap halfspace misses the ball", "offset");
            return static_cast<int>(c.center.size());
          },
          [](const AugmentedSet& a) {
            if (!a.base) throw ConfigError("augmented set has no base", "base");
            if (!(a.lower <= a.upper)) throw ConfigError("augmented bounds are inverted", "mid");
            return a.base->dim() + 1;
          },
      },
      shape);
}

Eigen::VectorXd ball_argmax(const Eigen::VectorXd& c, double r, const Eigen::VectorXd& theta) {
  const double n = theta.norm();
  if (n == 0.0) return c;
  return c + (r / n) * theta;
}

Eigen::VectorXd project_ball(const Eigen::VectorXd& c, double r, const Eigen::VectorXd& x) {
  const Eigen::VectorXd diff = x - c;
  const double n = diff.norm();
  if (n <= r) return x;
  return c + (r / n) * diff;
}

// Center and radius of the disc {<a, x> = b} intersected with the cap's ball.
struct Disc {
  Eigen::VectorXd center;
  double radius;
};

Disc cap_disc(const HalfspaceCap& cap) {
  const double an2 = cap.normal.squaredNorm();
  const double excess = cap.normal.dot(cap.center) - cap.offset;
  Disc disc{cap.center - (excess / an2) * cap.normal, 0.0};
  disc.radius = std::sqrt(std::max(0.0, cap.radius * cap.radius - excess * excess / an2));
  return disc;
}

Eigen::VectorXd cap_argmax(const HalfspaceCap& cap, const Eigen::VectorXd& theta) {
  Eigen::VectorXd x = ball_argmax(cap.center, cap.radius, theta);
  if (cap.normal.dot(x) <= cap.offset) return x;
  const Disc disc = cap_disc(cap);
  const Eigen::VectorXd perp =
      theta - (theta.dot(cap.normal) / cap.normal.squaredNorm()) * cap.normal;
  const double pn = perp.norm();
  if (pn <= 1e-15 * std::max(1.0, theta.norm())) return disc.center;
  return disc.center + (disc.radius / pn) * perp;
}

Eigen::VectorXd cap_project(const HalfspaceCap& cap, const Eigen::VectorXd& x) {
  const double an2 = cap.normal.squaredNorm();
  const bool in_ball = (x - cap.center).norm() <= cap.radius;
  const bool in_half = cap.normal.dot(x) <= cap.offset;
  if (in_ball && in_half) return x;
  Eigen::VectorXd pb = project_ball(cap.center, cap.radius, x);
  if (cap.normal.dot(pb) <= cap.offset) return pb;
  Eigen::VectorXd ph = x - (std::max(0.0, cap.normal.dot(x) - cap.offset) / an2) * cap.normal;
  if ((ph - cap.center).norm() <= cap.radius) return ph;
  // Both constraints active: project onto the plane, then onto the disc within it.
  const Disc disc = cap_disc(cap);
  const Eigen::VectorXd q = x - ((cap.normal.dot(x) - cap.offset) / an2) * cap.normal;
  return project_ball(disc.center, disc.radius, q);
}

}  // namespace

ConvexSet::ConvexSet(Shape shape) : shape_(std::move(shape)), dim_(validate(shape_)) {}

ConvexSet augment_set(const ConvexSet& base, double lower, double upper) {
  return ConvexSet(AugmentedSet{std::make_shared<const ConvexSet>(base), lower, upper});
}

Eigen::VectorXd canonical_point(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const Ball& b) -> Eigen::VectorXd { return b.center; },
          [](const Box& b) -> Eigen::VectorXd { return 0.5 * (b.lower + b.upper); },
          [](const HullOfPoints& h) -> Eigen::VectorXd { return h.vertices.front(); },
          [](const HalfspaceCap& c) -> Eigen::VectorXd { return cap_project(c, c.center); },
          [](const AugmentedSet& a) -> Eigen::VectorXd {
            Eigen::VectorXd x(a.base->dim() + 1);
            x << canonical_point(*a.base), a.upper;
            return x;
          },
      },
      set.shape());
}

Eigen::VectorXd support_argmax(const ConvexSet& set, const Eigen::VectorXd& theta) {
  if (theta.size() != set.dim()) throw InputError("support_argmax: dimension mismatch");
  if (theta.isZero(0.0)) return canonical_point(set);
  return std::visit(
      Overloaded{
          [&](const Ball& b) -> Eigen::VectorXd { return ball_argmax(b.center, b.radius, theta); },
          [&](const Box& b) -> Eigen::VectorXd {
            Eigen::VectorXd x(theta.size());
            for (Eigen::Index i = 0; i < theta.size(); ++i)
              x[i] = theta[i] > 0.0   ? b.upper[i]
                     : theta[i] < 0.0 ? b.lower[i]
                                      : 0.5 * (b.lower[i] + b.upper[i]);
            return x;
          },
          [&](const HullOfPoints& h) -> Eigen::VectorXd {
            std::size_t best = 0;
            double best_val = h.vertices[0].dot(theta);
            for (std::size_t i = 1; i < h.vertices.size(); ++i) {
              const double v = h.vertices[i].dot(theta);
              if (v > best_val) {
                best_val = v;
                best = i;
              }
            }
            return h.vertices[best];
          },
          [&](const HalfspaceCap& c) -> Eigen::VectorXd { return cap_argmax(c, theta); },
          [&](const AugmentedSet& a) -> Eigen::VectorXd {
            const int d = a.base->dim();
            Eigen::VectorXd x(d + 1);
            x.head(d) = support_argmax(*a.base, theta.head(d));
            x[d] = theta[d] >= 0.0 ? a.upper : a.lower;
            return x;
          },
      },
      set.shape());
}

double support(const ConvexSet& set, const Eigen::VectorXd& theta) {
  return theta.dot(support_argmax(set, theta));
}

Eigen::VectorXd project(const ConvexSet& set, const Eigen::VectorXd& x) {
  if (x.size() != set.dim()) throw InputError("project: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const Ball& b) -> Eigen::VectorXd { return project_ball(b.center, b.radius, x); },
          [&](const Box& b) -> Eigen::VectorXd { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const HullOfPoints& h) -> Eigen::VectorXd { return project_onto_hull(h.vertices, x); },
          [&](const HalfspaceCap& c) -> Eigen::VectorXd { return cap_project(c, x); },
          [&](const AugmentedSet& a) -> Eigen::VectorXd {
            const int d = a.base->dim();
            Eigen::VectorXd p(d + 1);
            p.head(d) = project(*a.base, x.head(d));
            p[d] = std::clamp(x[d], a.lower, a.upper);
            return p;
          },
      },
      set.shape());
}

double distance(const ConvexSet& set, const Eigen::VectorXd& x) {
  return (x - project(set, x)).norm();
}

ConvexSet scaled(const ConvexSet& set, double factor) {
  if (!(factor > 0.0)) throw InputError("scale factor must be positive");
  return std::visit(
      Overloaded{
          [&](const Ball& b) { return ConvexSet(Ball{factor * b.center, factor * b.radius}); },
          [&](const Box& b) { return ConvexSet(Box{factor * b.lower, factor * b.upper}); },
          [&](const HullOfPoints& h) {
            HullOfPoints out;
            for (const auto& v : h.vertices) out.vertices.push_back(factor * v);
            return ConvexSet(std::move(out));
          },
          [&](const HalfspaceCap& c) {
            return ConvexSet(
                HalfspaceCap{factor * c.center, factor * c.radius, c.normal, factor * c.offset});
          },
          [&](const AugmentedSet& a) {
            return ConvexSet(AugmentedSet{std::make_shared<const ConvexSet>(scaled(*a.base, factor)),
                                          factor * a.lower, factor * a.upper});
          },
      },
      set.shape());
}

double max_norm(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const Ball& b) { return b.center.norm() + b.radius; },
          [](const Box& b) { return b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs()).norm(); },
          [](const HullOfPoints& h) {
            double m = 0.0;
            for (const auto& v : h.vertices) m = std::max(m, v.norm());
            return m;
          },
          [](const HalfspaceCap& c) { return c.center.norm() + c.radius; },
          [](const AugmentedSet& a) {
            const double b = max_norm(*a.base);
            const double y = std::max(std::abs(a.lower), std::abs(a.upper));
            return std::sqrt(b * b + y * y);
          },
      },
      set.shape());
}

Eigen::VectorXd project_onto_hull(const std::vector<Eigen::VectorXd>& points,
                                  const Eigen::VectorXd& x, double gap_tol) {
  const std::size_t n = points.size();
  if (n == 0) throw InputError("project_onto_hull: no points");
  std::vector<Eigen::VectorXd> q(n);
  double scale = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = points[i] - x;
    const double sn = q[i].squaredNorm();
    scale = std::max(scale, sn);
    if (sn < q[start].squaredNorm()) start = i;
  }
  const double tol = gap_tol * std::max(1.0, scale);
  constexpr double kWeightEps = 1e-14;

  std::vector<std::size_t> corral{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd v = q[start];

  // Minimizes |sum alpha_i q_i| over the affine hull of the corral.
  auto affine_minimizer = [&](const std::vector<std::size_t>& idx) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = q[idx[i]].dot(q[idx[j]]);
      K(i, m) = K(m, i) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[m] = 1.0;
    Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    return Eigen::VectorXd(sol.head(m));
  };

  const std::size_t max_major = 100 * (n + 10);
  for (std::size_t major = 0; major < max_major; ++major) {
    std::size_t j = 0;
    double best = q[0].dot(v);
    for (std::size_t i = 1; i < n; ++i) {
      const double val = q[i].dot(v);
      if (val < best) {
        best = val;
        j = i;
      }
    }
    if (v.squaredNorm() - best <= tol) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    lambda.push_back(0.0);

    for (;;) {
      const Eigen::VectorXd alpha = affine_minimizer(corral);
      bool interior = true;
      for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (!(alpha[i] > kWeightEps)) interior = false;
      if (interior) {
        for (std::size_t i = 0; i < corral.size(); ++i) lambda[i] = alpha[static_cast<Eigen::Index>(i)];
        break;
      }
      double step = 1.0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        const double a = alpha[static_cast<Eigen::Index>(i)];
        if (a <= kWeightEps && lambda[i] - a > 0.0) step = std::min(step, lambda[i] / (lambda[i] - a));
      }
      for (std::size_t i = 0; i < corral.size(); ++i)
        lambda[i] = step * alpha[static_cast<Eigen::Index>(i)] + (1.0 - step) * lambda[i];
      // Drop the points whose weight reached zero; keep at least one.
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_w;
      for (std::size_t i = 0; i < corral.size(); ++i)
        if (lambda[i] > kWeightEps) {
          keep_idx.push_back(corral[i]);
          keep_w.push_back(lambda[i]);
        }
      if (keep_idx.empty()) {
        const auto it = std::max_element(lambda.begin(), lambda.end());
        keep_idx.push_back(corral[static_cast<std::size_t>(it - lambda.begin())]);
        keep_w.push_back(1.0);
      }
      double total = 0.0;
      for (double w : keep_w) total += w;
      for (double& w : keep_w) w /= total;
      corral = std::move(keep_idx);
      lambda = std::move(keep_w);
      if (corral.size() == 1) break;
    }
    v = Eigen::VectorXd::Zero(x.size());
    for (std::size_t i = 0; i < corral.size(); ++i) v += lambda[i] * q[corral[i]];
  }
  return x + v;
}

}  // namespace approach
