#include "approach/environments.hpp"

#include <algorithm>
#include <cmath>

#include "approach/errors.hpp"

namespace approach {
namespace {

void check_sizes(int S, int A, int H, int d) {
  if (S < 1) throw ConfigError("S must be positive", "S");
  if (A < 1) throw ConfigError("A must be positive", "A");
  if (H < 1) throw ConfigError("H must be positive", "H");
  if (d < 1) throw ConfigError("d must be positive", "d");
}

void fill_distribution(Rng& rng, double* out, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = rng.uniform() + 1e-3;
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

}  // namespace

TabularVMDP random_dense(int S, int A, int H, int d, std::uint64_t seed, NoiseLaw noise) {
  check_sizes(S, A, H, d);
  Rng rng(seed);
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S);
  Eigen::MatrixXd r(d, H * S * A);
  for (int i = 0; i < H * S * A; ++i) {
    fill_distribution(rng, P.data() + static_cast<std::size_t>(i) * S, S);
    r.col(i) = rng.in_ball(d);
  }
  return TabularVMDP(S, A, H, d, 0, std::move(P), std::move(r), noise);
}

TabularVMDP chain(int S, int H, int d) {
  check_sizes(S, 2, H, d);
  std::vector<double> P(static_cast<std::size_t>(H) * S * 2 * S, 0.0);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, H * S * 2);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      const int base = (h * S + s) * 2;
      P[static_cast<std::size_t>(base) * S + std::min(s + 1, S - 1)] = 1.0;
      P[static_cast<std::size_t>(base + 1) * S + std::max(s - 1, 0)] = 1.0;
      r(0, base) = S == 1 ? 1.0 : static_cast<double>(s) / (S - 1);
      if (d >= 2)
        r(1, base + 1) = 0.5;
      else
        r(0, base + 1) = -0.5;
    }
  return TabularVMDP(S, 2, H, d, 0, std::move(P), std::move(r));
}

TabularVMDP two_arm() {
  Eigen::MatrixXd r(2, 2);
  r << 1.0, 0.0, 0.0, 1.0;
  return TabularVMDP(1, 2, 1, 2, 0, {1.0, 1.0}, std::move(r));
}

std::vector<double> two_arm_cost() { return {1.0, 0.0}; }

TabularVMDP resource_gridworld(int width, int height, int H, int d, std::uint64_t seed) {
  if (width < 1) throw ConfigError("width must be positive", "width");
  if (height < 1) throw ConfigError("height must be positive", "height");
  const int S = width * height, A = 5;
  check_sizes(S, A, H, d);
  Rng rng(seed);
  Eigen::MatrixXd rates(std::max(d - 1, 1), S);
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < rates.rows(); ++k) rates(k, s) = rng.uniform();
  const int goal = S - 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const int dx[A] = {0, 0, 0, -1, 1};
  const int dy[A] = {0, 1, -1, 0, 0};

  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, H * S * A);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const int x = s % width, y = s / width;
        const int nx = std::clamp(x + dx[a], 0, width - 1);
        const int ny = std::clamp(y + dy[a], 0, height - 1);
        const int target = ny * width + nx;
        const int idx = (h * S + s) * A + a;
        double* row = P.data() + static_cast<std::size_t>(idx) * S;
        row[target] += 0.9;
        row[s] += 0.1;
        r(0, idx) = (s == goal ? 1.0 : 0.0) * scale;
        // Moving consumes resources at the current cell's rates; staying is free.
        if (a != 0)
          for (int k = 1; k < d; ++k) r(k, idx) = rates(k - 1, s) * scale;
      }
  return TabularVMDP(S, A, H, d, 0, std::move(P), std::move(r));
}

std::vector<double> random_cost(const TabularVMDP& model, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(static_cast<std::size_t>(model.num_sa()));
  for (double& x : c) x = rng.uniform(-1.0, 1.0);
  return c;
}

LinearVMDP random_linear(int S, int A, int H, int d, int dl, std::uint64_t seed, NoiseLaw noise) {
  check_sizes(S, A, H, d);
  if (dl < 1) throw ConfigError("feature dimension must be positive", "d_lin");
  Rng rng(seed);
  Eigen::MatrixXd phi(S * A, dl);
  std::vector<double> buf(static_cast<std::size_t>(std::max(S, dl)));
  for (int i = 0; i < S * A; ++i) {
    fill_distribution(rng, buf.data(), dl);
    for (int j = 0; j < dl; ++j) phi(i, j) = buf[j];
  }
  std::vector<Eigen::MatrixXd> mu, W;
  for (int h = 0; h < H; ++h) {
    Eigen::MatrixXd m(S, dl), w(d, dl);
    for (int j = 0; j < dl; ++j) {
      fill_distribution(rng, buf.data(), S);
      for (int s = 0; s < S; ++s) m(s, j) = buf[s];
      w.col(j) = rng.in_ball(d);
    }
    mu.push_back(std::move(m));
    W.push_back(std::move(w));
  }
  return LinearVMDP(S, A, H, 0, std::move(phi), std::move(mu), std::move(W), noise);
}

TabularVMG random_game(int S, int A, int B, int H, int d, std::uint64_t seed, NoiseLaw noise) {
  if (B < 1) throw ConfigError("B must be positive", "B");
  return TabularVMG(random_dense(S, A * B, H, d, seed, noise), A, B);
}

}  // namespace approach
