#include "approach/matrix_game.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "approach/errors.hpp"

namespace approach {
namespace {

Eigen::VectorXd clean_distribution(Eigen::VectorXd p) {
  p = p.cwiseMax(0.0);
  const double s = p.sum();
  if (s > 0.0) p /= s;
  return p;
}

MatrixGameSolution finish(const Eigen::MatrixXd& M, Eigen::VectorXd x, Eigen::VectorXd y) {
  MatrixGameSolution sol;
  sol.row_strategy = clean_distribution(std::move(x));
  sol.col_strategy = clean_distribution(std::move(y));
  sol.value = sol.row_strategy.dot(M * sol.col_strategy);
  sol.gap = duality_gap(M, sol.row_strategy, sol.col_strategy);
  return sol;
}

// Row player's LP on the shifted matrix M' = M - min(M) + 1 (all entries >= 1):
//   max 1^T z  s.t.  M'^T z <= 1,  z >= 0,
// with optimum 1 / w where w is the value of M'. The slack reduced costs give
// the column player's LP solution.
MatrixGameSolution solve_simplex(const Eigen::MatrixXd& M) {
  const int A = static_cast<int>(M.rows());
  const int B = static_cast<int>(M.cols());
  const double shift = 1.0 - M.minCoeff();
  const Eigen::MatrixXd Mp = M.array() + shift;

  const int cols = A + B + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(B + 1, cols);
  for (int j = 0; j < B; ++j) {
    for (int i = 0; i < A; ++i) T(j, i) = Mp(i, j);
    T(j, A + j) = 1.0;
    T(j, cols - 1) = 1.0;
  }
  for (int i = 0; i < A; ++i) T(B, i) = -1.0;
  std::vector<int> basis(B);
  for (int j = 0; j < B; ++j) basis[j] = A + j;

  constexpr double kEps = 1e-12;
  const int max_pivots = 50 * (A + B) + 1000;
  for (int pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw ConvergenceError("simplex exceeded its pivot budget", -1.0);
    int enter = -1;
    for (int c = 0; c < cols - 1; ++c)
      if (T(B, c) < -kEps) {
        enter = c;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < B; ++r) {
      if (T(r, enter) <= kEps) continue;
      const double ratio = T(r, cols - 1) / T(r, enter);
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && leave >= 0 && basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) throw ConvergenceError("matrix game LP reported unbounded", -1.0);
    T.row(leave) /= T(leave, enter);
    for (int r = 0; r <= B; ++r)
      if (r != leave && T(r, enter) != 0.0) T.row(r) -= T(r, enter) * T.row(leave);
    basis[leave] = enter;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(A);
  for (int r = 0; r < B; ++r)
    if (basis[r] < A) z[basis[r]] = T(r, cols - 1);
  Eigen::VectorXd u(B);
  for (int j = 0; j < B; ++j) u[j] = T(B, A + j);
  return finish(M, z, u);
}

double softmax_into(const Eigen::VectorXd& logits, Eigen::VectorXd& out) {
  const double mx = logits.maxCoeff();
  out = (logits.array() - mx).exp();
  const double s = out.sum();
  out /= s;
  return s;
}

MatrixGameSolution solve_mwu(const Eigen::MatrixXd& M, const MatrixGameOptions& opts) {
  const auto A = M.rows(), B = M.cols();
  const double range = std::max(M.maxCoeff() - M.minCoeff(), 1e-12);
  const double eta = 0.5 / range;
  Eigen::VectorXd row_logits = Eigen::VectorXd::Zero(A), col_logits = Eigen::VectorXd::Zero(B);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(A, 1.0 / A);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(B, 1.0 / B);
  Eigen::VectorXd x_sum = Eigen::VectorXd::Zero(A), y_sum = Eigen::VectorXd::Zero(B);
  double gap = std::numeric_limits<double>::infinity();
  for (std::int64_t t = 1; t <= opts.max_iterations; ++t) {
    x_sum += x;
    y_sum += y;
    const Eigen::VectorXd row_loss = M * y;
    const Eigen::VectorXd col_gain = M.transpose() * x;
    row_logits -= eta * row_loss;
    col_logits += eta * col_gain;
    // Optimistic step: the last loss predicts the next one.
    softmax_into(row_logits - eta * row_loss, x);
    softmax_into(col_logits + eta * col_gain, y);
    if (t % 64 == 0 || t == opts.max_iterations) {
      const Eigen::VectorXd xa = x_sum / static_cast<double>(t);
      const Eigen::VectorXd ya = y_sum / static_cast<double>(t);
      gap = duality_gap(M, xa, ya);
      if (gap <= opts.tol) return finish(M, xa, ya);
      const double last_gap = duality_gap(M, x, y);
      if (last_gap <= opts.tol) return finish(M, x, y);
      gap = std::min(gap, last_gap);
    }
  }
  throw ConvergenceError("multiplicative weights did not reach the gap tolerance", gap);
}

}  // namespace

double duality_gap(const Eigen::MatrixXd& M, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return (M.transpose() * x).maxCoeff() - (M * y).minCoeff();
}

MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& M, const MatrixGameOptions& opts) {
  if (M.rows() == 0 || M.cols() == 0) throw InputError("matrix game is empty");
  if (!M.allFinite()) throw InputError("matrix game has non-finite entries");
  // Degenerate shapes are solved exactly with lowest-index tie-breaking so that
  // single-player reductions match the single-agent planner bit for bit.
  if (M.cols() == 1) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < M.rows(); ++i)
      if (M(i, 0) < M(best, 0)) best = i;
    MatrixGameSolution sol;
    sol.row_strategy = Eigen::VectorXd::Unit(M.rows(), best);
    sol.col_strategy = Eigen::VectorXd::Ones(1);
    sol.value = M(best, 0);
    sol.gap = 0.0;
    return sol;
  }
  if (M.rows() == 1) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < M.cols(); ++j)
      if (M(0, j) > M(0, best)) best = j;
    MatrixGameSolution sol;
    sol.row_strategy = Eigen::VectorXd::Ones(1);
    sol.col_strategy = Eigen::VectorXd::Unit(M.cols(), best);
    sol.value = M(0, best);
    sol.gap = 0.0;
    return sol;
  }
  MatrixGameSolution sol = opts.method == MatrixGameMethod::kSimplex ? solve_simplex(M)
                                                                      : solve_mwu(M, opts);
  if (sol.gap > opts.tol)
    throw ConvergenceError("matrix game certificate above tolerance", sol.gap);
  return sol;
}

}  // namespace approach
