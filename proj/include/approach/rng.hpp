#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace approach {

/// Splittable counter-based generator.
///
/// The n-th output of a stream is a pure function of (key, n): the SplitMix64
/// finalizer applied to key + n * golden_gamma. Child streams derive their key
/// from the parent key and a stream id, so results never depend on how many
/// draws other streams made. All distributions below are implemented here
/// rather than through <random> so that outputs are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;
  /// Index drawn from a probability vector by inverse CDF; always one draw.
  int discrete(std::span<const double> probs) noexcept;

  /// Uniform on the unit sphere in R^dim.
  Eigen::VectorXd unit_vector(int dim) noexcept;
  /// Uniform in the Euclidean ball of the given radius.
  Eigen::VectorXd in_ball(int dim, double radius = 1.0) noexcept;

  /// Independent child stream; does not advance this stream.
  Rng split(std::uint64_t stream_id) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  Rng(std::uint64_t key, std::uint64_t counter) noexcept : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace approach
