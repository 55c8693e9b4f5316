#include "approach/rfe_linear.hpp"

#include <algorithm>
#include <cmath>

#include "approach/errors.hpp"

namespace approach {
namespace {

TabularVMDP build_tabular(int S, int A, int H, int s1, const Eigen::MatrixXd& features,
                          const std::vector<Eigen::MatrixXd>& mu,
                          const std::vector<Eigen::MatrixXd>& W, NoiseLaw noise) {
  if (S <= 0 || A <= 0 || H <= 0) throw ConfigError("S, A and H must be positive");
  if (features.rows() != static_cast<Eigen::Index>(S) * A || features.cols() < 1)
    throw ConfigError("feature table must have S * A rows", "phi");
  if (static_cast<int>(mu.size()) != H || static_cast<int>(W.size()) != H)
    throw ConfigError("need one mu and one W matrix per step", "mu");
  const Eigen::Index dl = features.cols();
  const Eigen::Index d = W[0].rows();
  for (Eigen::Index i = 0; i < features.rows(); ++i)
    if (features.row(i).norm() > 1.0 + 1e-12) throw ConfigError("feature norm exceeds one", "phi");
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S);
  Eigen::MatrixXd r(d, static_cast<Eigen::Index>(H) * S * A);
  for (int h = 0; h < H; ++h) {
    if (mu[h].rows() != S || mu[h].cols() != dl) throw ConfigError("mu_h must be S x d_lin", "mu");
    if (W[h].rows() != d || W[h].cols() != dl) throw ConfigError("W_h must be d x d_lin", "W");
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const Eigen::VectorXd f = features.row(s * A + a).transpose();
        const Eigen::VectorXd row = mu[h] * f;
        const std::size_t idx = (static_cast<std::size_t>(h) * S + s) * A + a;
        for (int sp = 0; sp < S; ++sp) P[idx * S + sp] = row[sp];
        r.col(static_cast<Eigen::Index>(idx)) = W[h] * f;
      }
  }
  return TabularVMDP(S, A, H, static_cast<int>(d), s1, std::move(P), std::move(r), noise);
}

}  // namespace

LinearVMDP::LinearVMDP(int num_states, int num_actions, int horizon, int initial_state,
                       Eigen::MatrixXd features, std::vector<Eigen::MatrixXd> mu,
                       std::vector<Eigen::MatrixXd> W, NoiseLaw noise)
    : features_(std::move(features)),
      mu_(std::move(mu)),
      W_(std::move(W)),
      tabular_(build_tabular(num_states, num_actions, horizon, initial_state, features_, mu_, W_,
                             noise)) {}

LinearVMDP one_hot_linear(const TabularVMDP& model) {
  const int S = model.num_states(), A = model.num_actions(), H = model.horizon();
  std::vector<Eigen::MatrixXd> mu, W;
  for (int h = 0; h < H; ++h) {
    Eigen::MatrixXd m(S, S * A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const auto row = model.transition(h, s, a);
        for (int sp = 0; sp < S; ++sp) m(sp, s * A + a) = row[sp];
      }
    mu.push_back(std::move(m));
    W.push_back(model.mean_returns().middleCols(static_cast<Eigen::Index>(h) * S * A, S * A));
  }
  return LinearVMDP(S, A, H, model.initial_state(), Eigen::MatrixXd::Identity(S * A, S * A),
                    std::move(mu), std::move(W), model.noise());
}

GramState::GramState(int dim)
    : lambda_(Eigen::MatrixXd::Identity(dim, dim)), inverse_(Eigen::MatrixXd::Identity(dim, dim)) {
  if (dim <= 0) throw InputError("Gram dimension must be positive");
}

void GramState::add(const Eigen::VectorXd& phi) {
  lambda_.noalias() += phi * phi.transpose();
  ++updates_;
  if (updates_ % kReinvertEvery == 0) {
    reinvert();
    return;
  }
  const Eigen::VectorXd u = inverse_ * phi;
  const double denom = 1.0 + phi.dot(u);
  inverse_.noalias() -= (u * u.transpose()) / denom;
}

void GramState::reinvert() {
  Eigen::LLT<Eigen::MatrixXd> llt(lambda_);
  if (llt.info() != Eigen::Success) throw NumericalError("Gram matrix lost positive definiteness");
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(lambda_.rows(), lambda_.cols()));
}

double GramState::drift() const {
  return (lambda_ * inverse_ - Eigen::MatrixXd::Identity(lambda_.rows(), lambda_.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double elliptical_bonus(const Eigen::MatrixXd& lambda_inv, const Eigen::VectorXd& phi, double beta,
                        double horizon) {
  const double q = phi.dot(lambda_inv * phi);
  if (!std::isfinite(q) || q < 0.0)
    throw NumericalError("inverse Gram matrix is not positive definite");
  return std::min(beta * std::sqrt(q), horizon);
}

double linear_beta(int feature_dim, int reward_dim, std::int64_t episodes, int horizon,
                   double delta, double c_beta) {
  if (!(c_beta > 0.0)) throw ConfigError("c_beta must be positive", "c_beta");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]", "delta");
  if (episodes < 1) throw ConfigError("episode count must be positive", "K");
  const double iota = std::log(static_cast<double>(feature_dim) * reward_dim *
                               static_cast<double>(episodes) * horizon / delta);
  return c_beta * feature_dim * horizon * std::sqrt(std::max(iota, 0.0));
}

LinearExploreResult linear_explore(const LinearVMDP& model, std::int64_t episodes, double beta,
                                   Rng& rng) {
  if (episodes < 1) throw InputError("exploration needs at least one episode");
  const TabularVMDP& M = model.tabular();
  const int S = M.num_states(), A = M.num_actions(), H = M.horizon(), dl = model.feature_dim();
  const double Hd = H;

  LinearExploreResult out;
  out.dataset = {S, A, H, M.reward_dim(), M.initial_state(), model.features(), {}};
  out.dataset.samples.reserve(static_cast<std::size_t>(episodes) * H);
  out.gram.assign(static_cast<std::size_t>(H), GramState(dl));
  out.v_tilde.reserve(static_cast<std::size_t>(episodes));

  std::vector<std::int64_t> counts(static_cast<std::size_t>(H) * S * A * S, 0);
  std::vector<double> V(static_cast<std::size_t>(H + 1) * S, 0.0);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  Eigen::VectorXd b(dl);

  for (std::int64_t k = 1; k <= episodes; ++k) {
    for (int h = H - 1; h >= 0; --h) {
      const double* next = V.data() + static_cast<std::size_t>(h + 1) * S;
      const Eigen::MatrixXd& inv = out.gram[h].inverse();
      b.setZero();
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          const std::size_t base = ((static_cast<std::size_t>(h) * S + s) * A + a) * S;
          double y = 0.0;
          for (int sp = 0; sp < S; ++sp) y += static_cast<double>(counts[base + sp]) * next[sp];
          if (y != 0.0) b += y * model.phi(s, a);
        }
      const Eigen::VectorXd w = inv * b;
      for (int s = 0; s < S; ++s) {
        int best_a = 0;
        double best = 0.0;
        for (int a = 0; a < A; ++a) {
          const Eigen::VectorXd f = model.phi(s, a);
          const double u = elliptical_bonus(inv, f, beta, Hd);
          const double q = std::clamp(w.dot(f) + u / Hd + u, -Hd, Hd);
          if (a == 0 || q > best) {
            best = q;
            best_a = a;
          }
        }
        V[static_cast<std::size_t>(h) * S + s] = best;
        greedy[static_cast<std::size_t>(h) * S + s] = best_a;
      }
    }
    out.v_tilde.push_back(V[M.initial_state()]);

    int s = M.initial_state();
    for (int h = 0; h < H; ++h) {
      const int a = greedy[static_cast<std::size_t>(h) * S + s];
      Eigen::VectorXd ret = M.sample_return(h, s, a, rng);
      const int next = rng.discrete(M.transition(h, s, a));
      counts[((static_cast<std::size_t>(h) * S + s) * A + a) * S + next] += 1;
      out.gram[h].add(model.phi(s, a));
      out.dataset.samples.push_back({h, s, a, next, std::move(ret)});
      s = next;
    }
  }
  return out;
}

LinearRewardFree::LinearRewardFree(LinearDataset dataset, double beta, std::int64_t episodes)
    : data_(std::move(dataset)), beta_(beta), episodes_(episodes) {
  if (data_.samples.empty()) throw InputError("linear planning needs a nonempty dataset");
  const int S = data_.num_states, A = data_.num_actions, H = data_.horizon;
  const auto dl = data_.features.cols();
  if (data_.features.rows() != static_cast<Eigen::Index>(S) * A)
    throw InputError("feature table does not match the dataset");
  lambda_.assign(static_cast<std::size_t>(H), Eigen::MatrixXd::Identity(dl, dl));
  transition_counts_.assign(static_cast<std::size_t>(H) * S * A * S, 0);
  return_sums_ = Eigen::MatrixXd::Zero(data_.reward_dim, static_cast<Eigen::Index>(H) * S * A);
  for (const LinearSample& x : data_.samples) {
    if (x.h < 0 || x.h >= H || x.state < 0 || x.state >= S || x.action < 0 || x.action >= A ||
        x.next_state < 0 || x.next_state >= S || x.ret.size() != data_.reward_dim)
      throw InputError("dataset sample out of range");
    const auto f = data_.features.row(x.state * A + x.action);
    lambda_[x.h].noalias() += f.transpose() * f;
    const std::size_t idx = (static_cast<std::size_t>(x.h) * S + x.state) * A + x.action;
    transition_counts_[idx * S + x.next_state] += 1;
    return_sums_.col(static_cast<Eigen::Index>(idx)) += x.ret;
  }
  solved_features_.reserve(static_cast<std::size_t>(H));
  bonus_.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h) {
    Eigen::LLT<Eigen::MatrixXd> llt(lambda_[h]);
    if (llt.info() != Eigen::Success) throw NumericalError("Gram matrix is not positive definite");
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(dl, dl));
    solved_features_.push_back(data_.features * inv);
    for (int i = 0; i < S * A; ++i)
      bonus_[static_cast<std::size_t>(h) * S * A + i] =
          elliptical_bonus(inv, data_.features.row(i).transpose(), beta_, H);
  }
}

LinearPlan LinearRewardFree::plan_values(const Eigen::VectorXd& theta) const {
  if (theta.size() != data_.reward_dim) throw InputError("theta has the wrong dimension");
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
  const int S = data_.num_states, A = data_.num_actions, H = data_.horizon;
  const double Hd = H;
  const auto dl = data_.features.cols();

  LinearPlan out;
  out.num_states = S;
  out.initial_state = data_.initial_state;
  out.V.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  const Eigen::RowVectorXd theta_r = theta.transpose() * return_sums_;
  Eigen::VectorXd b(dl);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = out.V.data() + static_cast<std::size_t>(h + 1) * S;
    b.setZero();
    for (int i = 0; i < S * A; ++i) {
      const std::size_t idx = static_cast<std::size_t>(h) * S * A + i;
      double y = theta_r[static_cast<Eigen::Index>(idx)];
      for (int sp = 0; sp < S; ++sp)
        y += static_cast<double>(transition_counts_[idx * S + sp]) * next[sp];
      if (y != 0.0) b += y * data_.features.row(i).transpose();
    }
    // w_hat^T phi = b^T Lambda^{-1} phi
    const Eigen::VectorXd q_lin = solved_features_[h] * b;
    for (int s = 0; s < S; ++s) {
      int best_a = 0;
      double best = 0.0;
      for (int a = 0; a < A; ++a) {
        const double u = bonus_[static_cast<std::size_t>(h) * S * A + s * A + a];
        const double q = std::clamp(q_lin[s * A + a] + u, -Hd, Hd);
        if (a == 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      out.V[static_cast<std::size_t>(h) * S + s] = best;
      actions[static_cast<std::size_t>(h) * S + s] = best_a;
    }
  }
  out.policy = Policy::deterministic(H, S, A, actions);
  return out;
}

LinearPlan linear_plan(const LinearDataset& dataset, const Eigen::VectorXd& theta, double beta) {
  if (dataset.samples.empty()) throw InputError("linear planning needs a nonempty dataset");
  return LinearRewardFree(dataset, beta, 0).plan_values(theta);
}

}  // namespace approach
