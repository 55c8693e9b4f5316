#include "approach/rfe_tabular.hpp"

#include <algorithm>
#include <cmath>

#include "approach/errors.hpp"
#include "approach/planner.hpp"

namespace approach {

BonusConfig make_bonus_config(int reward_dim, int num_states, int num_actions,
                              std::int64_t episodes, int horizon, double delta, double c_beta) {
  if (!(c_beta > 0.0)) throw ConfigError("c_beta must be positive", "c_beta");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]", "delta");
  if (episodes < 1) throw ConfigError("episode count must be positive", "K");
  BonusConfig cfg;
  cfg.c_beta = c_beta;
  cfg.delta = delta;
  cfg.iota = std::log(static_cast<double>(reward_dim) * num_states * num_actions *
                      static_cast<double>(episodes) * horizon / delta);
  if (!(cfg.iota > 0.0)) throw ConfigError("log factor must be positive", "delta");
  return cfg;
}

double bonus(std::int64_t t, const BonusConfig& cfg, int reward_dim, int num_states, int horizon) {
  const double n = static_cast<double>(std::max<std::int64_t>(t, 1));
  const double h2 = static_cast<double>(horizon) * horizon;
  return cfg.c_beta * (std::sqrt(std::min(reward_dim, num_states) * h2 * cfg.iota / n) +
                       h2 * num_states * cfg.iota / n);
}

EmpiricalModel::EmpiricalModel(int num_states, int num_actions, int horizon, int reward_dim,
                               int initial_state)
    : S_(num_states),
      A_(num_actions),
      H_(horizon),
      d_(reward_dim),
      s1_(initial_state),
      counts_(static_cast<std::size_t>(horizon) * num_states * num_actions, 0),
      transition_counts_(static_cast<std::size_t>(horizon) * num_states * num_actions * num_states, 0),
      return_sums_(Eigen::MatrixXd::Zero(reward_dim, horizon * num_states * num_actions)) {}

std::vector<double> EmpiricalModel::p_hat(int h, int s, int a) const {
  const auto idx = static_cast<std::size_t>(sa_index(h, s, a));
  const std::int64_t n = counts_[idx];
  std::vector<double> row(S_);
  for (int sp = 0; sp < S_; ++sp)
    row[sp] = n > 0 ? static_cast<double>(transition_counts_[idx * S_ + sp]) / static_cast<double>(n)
                    : 1.0 / S_;
  return row;
}

Eigen::VectorXd EmpiricalModel::r_hat(int h, int s, int a) const {
  const int idx = sa_index(h, s, a);
  const std::int64_t n = counts_[idx];
  if (n == 0) return Eigen::VectorXd::Zero(d_);
  return return_sums_.col(idx) / static_cast<double>(n);
}

void EmpiricalModel::record(int h, int s, int a, const Eigen::VectorXd& ret, int next) {
  const auto idx = static_cast<std::size_t>(sa_index(h, s, a));
  ++counts_[idx];
  ++transition_counts_[idx * S_ + next];
  return_sums_.col(static_cast<Eigen::Index>(idx)) += ret;
}

void EmpiricalModel::take_snapshot() {
  snapshot_.resize(transition_counts_.size());
  for (int h = 0; h < H_; ++h)
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        const auto row = p_hat(h, s, a);
        std::copy(row.begin(), row.end(),
                  snapshot_.begin() + static_cast<std::ptrdiff_t>(sa_index(h, s, a)) * S_);
      }
}

TabularVMDP EmpiricalModel::planning_model() const {
  std::vector<double> P;
  if (has_snapshot()) {
    P = snapshot_;
  } else {
    P.resize(transition_counts_.size());
    for (int h = 0; h < H_; ++h)
      for (int s = 0; s < S_; ++s)
        for (int a = 0; a < A_; ++a) {
          const auto row = p_hat(h, s, a);
          std::copy(row.begin(), row.end(),
                    P.begin() + static_cast<std::ptrdiff_t>(sa_index(h, s, a)) * S_);
        }
  }
  Eigen::MatrixXd r(d_, H_ * S_ * A_);
  for (int h = 0; h < H_; ++h)
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) r.col(sa_index(h, s, a)) = r_hat(h, s, a);
  return TabularVMDP(S_, A_, H_, d_, s1_, std::move(P), std::move(r));
}

EmpiricalModel EmpiricalModel::restore(int num_states, int num_actions, int horizon,
                                       int reward_dim, int initial_state,
                                       std::vector<std::int64_t> transition_counts,
                                       Eigen::MatrixXd return_sums, std::vector<double> snapshot) {
  EmpiricalModel m(num_states, num_actions, horizon, reward_dim, initial_state);
  if (transition_counts.size() != m.transition_counts_.size())
    throw ConfigError("transition count table has the wrong size", "transition_counts");
  if (return_sums.rows() != reward_dim || return_sums.cols() != m.return_sums_.cols())
    throw ConfigError("return sum table has the wrong shape", "return_sums");
  if (!snapshot.empty() && snapshot.size() != m.transition_counts_.size())
    throw ConfigError("snapshot has the wrong size", "snapshot");
  m.transition_counts_ = std::move(transition_counts);
  for (std::size_t i = 0; i < m.counts_.size(); ++i) {
    std::int64_t n = 0;
    for (int sp = 0; sp < num_states; ++sp) {
      const auto c = m.transition_counts_[i * num_states + sp];
      if (c < 0) throw ConfigError("negative transition count", "transition_counts");
      n += c;
    }
    m.counts_[i] = n;
  }
  m.return_sums_ = std::move(return_sums);
  m.snapshot_ = std::move(snapshot);
  return m;
}

ExploreResult vi_zero_explore(const TabularVMDP& model, std::int64_t episodes,
                              const BonusConfig& cfg, Rng& rng) {
  if (episodes < 1) throw InputError("exploration needs at least one episode");
  const int S = model.num_states(), A = model.num_actions(), H = model.horizon();
  const int d = model.reward_dim();
  const double Hd = H;

  ExploreResult out{EmpiricalModel(S, A, H, d, model.initial_state()), {}, 0};
  EmpiricalModel& emp = out.empirical;
  out.log.reserve(static_cast<std::size_t>(episodes));

  std::vector<double> q_tilde(static_cast<std::size_t>(model.num_sa()), Hd);
  std::vector<double> v_tilde(static_cast<std::size_t>(H + 1) * S, 0.0);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  double delta = std::numeric_limits<double>::infinity();

  for (std::int64_t k = 1; k <= episodes; ++k) {
    for (int h = H - 1; h >= 0; --h) {
      const double* next = v_tilde.data() + static_cast<std::size_t>(h + 1) * S;
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const int idx = model.sa_index(h, s, a);
          const std::int64_t t = emp.count(h, s, a);
          if (t > 0) {
            double pv = 0.0;
            for (int sp = 0; sp < S; ++sp)
              pv += static_cast<double>(emp.transition_count(h, s, a, sp)) * next[sp];
            pv /= static_cast<double>(t);
            q_tilde[idx] = std::min(pv + bonus(t, cfg, d, S, H), Hd);
          }
        }
        int best_a = 0;
        double best = q_tilde[model.sa_index(h, s, 0)];
        for (int a = 1; a < A; ++a) {
          const double q = q_tilde[model.sa_index(h, s, a)];
          if (q > best) {
            best = q;
            best_a = a;
          }
        }
        v_tilde[static_cast<std::size_t>(h) * S + s] = best;
        greedy[static_cast<std::size_t>(h) * S + s] = best_a;
      }
    }
    const double v1 = v_tilde[model.initial_state()];
    if (v1 <= delta) {
      delta = v1;
      emp.take_snapshot();
      out.snapshot_episode = k;
    }
    out.log.push_back({k, v1, delta});

    int s = model.initial_state();
    for (int h = 0; h < H; ++h) {
      const int a = greedy[static_cast<std::size_t>(h) * S + s];
      // Return samples are recorded for the planning phase; exploration never reads them.
      const Eigen::VectorXd ret = model.sample_return(h, s, a, rng);
      const int next = rng.discrete(model.transition(h, s, a));
      emp.record(h, s, a, ret, next);
      s = next;
    }
  }
  return out;
}

Policy rfe_plan(const EmpiricalModel& empirical, const Eigen::VectorXd& theta) {
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
  return value_iteration(ScalarizedView(empirical.planning_model(), theta)).policy;
}

TabularRewardFree::TabularRewardFree(EmpiricalModel empirical, std::int64_t episodes)
    : empirical_(std::move(empirical)), planning_(empirical_.planning_model()), episodes_(episodes) {}

Policy TabularRewardFree::plan(const Eigen::VectorXd& theta) const {
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
  return value_iteration(ScalarizedView(planning_, theta)).policy;
}

}  // namespace approach
