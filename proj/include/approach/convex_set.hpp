#pragma once

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace approach {

struct Ball {
  Eigen::VectorXd center;
  double radius;
};

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct HullOfPoints {
  std::vector<Eigen::VectorXd> vertices;
};

/// {x : |x - center| <= radius, <normal, x> <= offset}
struct HalfspaceCap {
  Eigen::VectorXd center;
  double radius;
  Eigen::VectorXd normal;
  double offset;
};

class ConvexSet;

/// {x (+) y : x in base, lower <= y <= upper}. Used for cost-augmented targets,
/// where `upper` is the cost threshold and `lower` a floor that keeps the set bounded.
struct AugmentedSet {
  std::shared_ptr<const ConvexSet> base;
  double lower;
  double upper;
};

/// Nonempty, bounded, closed convex target set in R^d.
class ConvexSet {
 public:
  using Shape = std::variant<Ball, Box, HullOfPoints, HalfspaceCap, AugmentedSet>;

  /// Validates the shape; throws ConfigError on an empty or malformed set.
  explicit ConvexSet(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  int dim() const noexcept { return dim_; }

 private:
  Shape shape_;
  int dim_;
};

ConvexSet augment_set(const ConvexSet& base, double lower, double upper);

/// max_{x in C} <theta, x>
double support(const ConvexSet& set, const Eigen::VectorXd& theta);

/// A maximizer of <theta, x> over C. theta = 0 yields canonical_point(set);
/// ties among hull vertices go to the lowest index.
Eigen::VectorXd support_argmax(const ConvexSet& set, const Eigen::VectorXd& theta);

/// Ball center, box midpoint, first hull vertex.
Eigen::VectorXd canonical_point(const ConvexSet& set);

/// Euclidean projection onto C.
Eigen::VectorXd project(const ConvexSet& set, const Eigen::VectorXd& x);

double distance(const ConvexSet& set, const Eigen::VectorXd& x);

/// The image {factor * x : x in C}, factor > 0.
ConvexSet scaled(const ConvexSet& set, double factor);

/// Largest Euclidean norm over C (an upper bound for hull and cap shapes).
double max_norm(const ConvexSet& set);

/// Nearest point of conv(points) to x by Wolfe's minimum-norm-point method
/// (fully corrective Frank-Wolfe). Terminates when the Frank-Wolfe duality
/// gap drops below gap_tol.
Eigen::VectorXd project_onto_hull(const std::vector<Eigen::VectorXd>& points,
                                  const Eigen::VectorXd& x, double gap_tol = 1e-12);

}  // namespace approach
