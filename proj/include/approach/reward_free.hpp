#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "approach/vmdp.hpp"

namespace approach {

/// Planning phase of a reward-free algorithm whose exploration already ran.
/// plan(theta) returns a near-optimal policy for the scalarized reward <theta, r>.
class RewardFreePlanner {
 public:
  virtual ~RewardFreePlanner() = default;
  virtual Policy plan(const Eigen::VectorXd& theta) const = 0;
  virtual std::int64_t exploration_episodes() const = 0;
};

}  // namespace approach
