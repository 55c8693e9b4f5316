#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace approach {

/// Zero-sum matrix game where the row player minimizes x^T M y and the
/// column player maximizes it.
struct MatrixGameSolution {
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
  double value = 0.0;
  /// max_j (x^T M)_j - min_i (M y)_i, computed directly from the strategies.
  double gap = 0.0;
};

enum class MatrixGameMethod {
  /// Exact tableau simplex on the row player's LP with Bland's rule.
  kSimplex,
  /// Optimistic multiplicative-weights self-play with averaged iterates.
  kMultiplicativeWeights,
};

struct MatrixGameOptions {
  MatrixGameMethod method = MatrixGameMethod::kSimplex;
  double tol = 1e-6;
  std::int64_t max_iterations = 1'000'000;
};

/// Throws InputError on empty or non-finite input and ConvergenceError (with
/// the current gap) when the certificate does not reach tol.
MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& M, const MatrixGameOptions& opts = {});

/// max_j (x^T M)_j - min_i (M y)_i
double duality_gap(const Eigen::MatrixXd& M, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace approach
