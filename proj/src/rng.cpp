#include "approach/rng.hpp"

#include <cmath>
#include <numbers>

namespace approach {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept : key_(mix64(seed + kGamma)), counter_(0) {}

std::uint64_t Rng::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Lemire-style rejection keeps the result unbiased.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    const auto m = static_cast<unsigned __int128>(x) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double Rng::normal() noexcept {
  // Box-Muller, one variate per call so the draw count stays fixed.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::discrete(std::span<const double> probs) noexcept {
  const double u = uniform();
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  // Rounding left the cumulative sum slightly below one.
  return last_positive;
}

Eigen::VectorXd Rng::unit_vector(int dim) noexcept {
  Eigen::VectorXd v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v[i] = normal();
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Eigen::VectorXd Rng::in_ball(int dim, double radius) noexcept {
  Eigen::VectorXd dir = unit_vector(dim);
  return dir * (radius * std::pow(uniform(), 1.0 / dim));
}

Rng Rng::split(std::uint64_t stream_id) const noexcept {
  return Rng(mix64(key_ ^ mix64(stream_id + kGamma)), 0);
}

}  // namespace approach
