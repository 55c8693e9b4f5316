#include "approach/vmdp.hpp"

#include <cmath>
#include <string>

#include "approach/errors.hpp"

namespace approach {
namespace {

constexpr double kSumTol = 1e-12;
constexpr double kNormTol = 1e-12;

void check_distribution(std::span<const double> p, const std::string& what,
                        const std::string& field) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw ConfigError(what + " has a negative or NaN entry", field);
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTol) throw ConfigError(what + " does not sum to one", field);
}

}  // namespace

TabularVMDP::TabularVMDP(int num_states, int num_actions, int horizon, int reward_dim,
                         int initial_state, std::vector<double> transitions,
                         Eigen::MatrixXd mean_returns, NoiseLaw noise)
    : S_(num_states),
      A_(num_actions),
      H_(horizon),
      d_(reward_dim),
      s1_(initial_state),
      transitions_(std::move(transitions)),
      mean_returns_(std::move(mean_returns)),
      noise_(noise) {
  if (S_ <= 0 || A_ <= 0 || H_ <= 0 || d_ <= 0)
    throw ConfigError("S, A, H and d must be positive");
  if (s1_ < 0 || s1_ >= S_) throw ConfigError("initial state out of range", "s1");
  if (transitions_.size() != static_cast<std::size_t>(num_sa()) * S_)
    throw ConfigError("transition table has the wrong size", "P");
  if (mean_returns_.rows() != d_ || mean_returns_.cols() != num_sa())
    throw ConfigError("return table has the wrong shape", "r");
  if (!(noise_.level >= 0.0 && noise_.level <= 1.0))
    throw ConfigError("noise level must lie in [0, 1]", "noise");
  for (int h = 0; h < H_; ++h)
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        check_distribution(transition(h, s, a), "P[" + std::to_string(h) + "][" +
                                                    std::to_string(s) + "][" +
                                                    std::to_string(a) + "]",
                           "P");
        if (mean_return(h, s, a).norm() > 1.0 + kNormTol)
          throw ConfigError("mean return outside the unit ball", "r");
      }
}

Eigen::VectorXd TabularVMDP::sample_return(int h, int s, int a, Rng& rng) const {
  const auto mean = mean_return(h, s, a);
  if (noise_.level == 0.0) return mean;
  const double norm = mean.norm();
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(d_);
  if (norm > 0.0)
    direction = mean / norm;
  else
    direction[0] = 1.0;
  const double u = rng.uniform();
  const double sign = u < 0.5 * (1.0 + norm) ? 1.0 : -1.0;
  Eigen::VectorXd sample = (1.0 - noise_.level) * mean + (noise_.level * sign) * direction;
  // Guard against rounding pushing the norm a hair above one.
  const double sn = sample.norm();
  if (sn > 1.0) sample /= sn;
  return sample;
}

Policy::Policy(int horizon, int num_states, int num_actions, std::vector<double> probs)
    : H_(horizon), S_(num_states), A_(num_actions), probs_(std::move(probs)) {
  if (H_ <= 0 || S_ <= 0 || A_ <= 0) throw ConfigError("policy dimensions must be positive");
  if (probs_.size() != static_cast<std::size_t>(H_) * S_ * A_)
    throw ConfigError("policy table has the wrong size");
  for (int h = 0; h < H_; ++h)
    for (int s = 0; s < S_; ++s) check_distribution(distribution(h, s), "policy row", "policy");
}

Policy Policy::uniform(int horizon, int num_states, int num_actions) {
  return Policy(horizon, num_states, num_actions,
                std::vector<double>(static_cast<std::size_t>(horizon) * num_states * num_actions,
                                    1.0 / num_actions));
}

Policy Policy::deterministic(int horizon, int num_states, int num_actions,
                             std::span<const int> actions) {
  if (actions.size() != static_cast<std::size_t>(horizon) * num_states)
    throw ConfigError("deterministic action table has the wrong size");
  std::vector<double> probs(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions) throw ConfigError("action out of range");
    probs[i * num_actions + actions[i]] = 1.0;
  }
  return Policy(horizon, num_states, num_actions, std::move(probs));
}

void Policy::set_action(int h, int s, int a) noexcept {
  auto row = distribution(h, s);
  for (int b = 0; b < A_; ++b) row[b] = b == a ? 1.0 : 0.0;
}

MixturePolicy MixturePolicy::uniform(std::vector<Policy> components) {
  if (components.empty()) throw InputError("mixture needs at least one component");
  const double w = 1.0 / static_cast<double>(components.size());
  MixturePolicy m{std::move(components), {}};
  m.weights.assign(m.components.size(), w);
  return m;
}

void MixturePolicy::validate() const {
  if (components.empty() || components.size() != weights.size())
    throw ConfigError("mixture components and weights disagree");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("mixture weight is negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTol) throw ConfigError("mixture weights do not sum to one");
}

Eigen::VectorXd Trajectory::return_sum() const {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(steps.empty() ? 0 : steps.front().ret.size());
  for (const auto& st : steps) total += st.ret;
  return total;
}

void check_compatible(const TabularVMDP& model, const Policy& policy) {
  if (policy.horizon() != model.horizon() || policy.num_states() != model.num_states() ||
      policy.num_actions() != model.num_actions())
    throw ConfigError("policy dimensions do not match the model");
}

Trajectory sample_episode(const TabularVMDP& model, const Policy& policy, Rng& rng) {
  check_compatible(model, policy);
  Trajectory traj;
  traj.rng_key = rng.key();
  traj.rng_counter = rng.counter();
  traj.steps.reserve(model.horizon());
  int s = model.initial_state();
  for (int h = 0; h < model.horizon(); ++h) {
    const int a = rng.discrete(policy.distribution(h, s));
    Eigen::VectorXd ret = model.sample_return(h, s, a, rng);
    const int next = rng.discrete(model.transition(h, s, a));
    traj.steps.push_back({s, a, std::move(ret), next});
    s = next;
  }
  return traj;
}

Trajectory sample_episode(const TabularVMDP& model, const MixturePolicy& policy, Rng& rng) {
  const int k = rng.discrete(policy.weights);
  return sample_episode(model, policy.components[k], rng);
}

Eigen::VectorXd exact_policy_value(const TabularVMDP& model, const Policy& policy) {
  check_compatible(model, policy);
  const int S = model.num_states(), A = model.num_actions(), d = model.reward_dim();
  Eigen::MatrixXd next = Eigen::MatrixXd::Zero(d, S);
  Eigen::MatrixXd cur(d, S);
  for (int h = model.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      for (int a = 0; a < A; ++a) {
        const double p = policy.prob(h, s, a);
        if (p == 0.0) continue;
        Eigen::VectorXd q = model.mean_return(h, s, a);
        const auto row = model.transition(h, s, a);
        for (int sp = 0; sp < S; ++sp)
          if (row[sp] != 0.0) q += row[sp] * next.col(sp);
        v += p * q;
      }
      cur.col(s) = v;
    }
    next.swap(cur);
  }
  return next.col(model.initial_state());
}

Eigen::VectorXd exact_policy_value(const TabularVMDP& model, const MixturePolicy& policy) {
  policy.validate();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model.reward_dim());
  for (std::size_t i = 0; i < policy.components.size(); ++i)
    if (policy.weights[i] != 0.0) v += policy.weights[i] * exact_policy_value(model, policy.components[i]);
  return v;
}

std::vector<double> exact_occupancy(const TabularVMDP& model, const Policy& policy) {
  check_compatible(model, policy);
  const int S = model.num_states(), A = model.num_actions();
  std::vector<double> occ(static_cast<std::size_t>(model.num_sa()), 0.0);
  std::vector<double> state_mass(S, 0.0), next_mass(S);
  state_mass[model.initial_state()] = 1.0;
  for (int h = 0; h < model.horizon(); ++h) {
    std::fill(next_mass.begin(), next_mass.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (state_mass[s] == 0.0) continue;
      for (int a = 0; a < A; ++a) {
        const double q = state_mass[s] * policy.prob(h, s, a);
        occ[model.sa_index(h, s, a)] = q;
        if (q == 0.0) continue;
        const auto row = model.transition(h, s, a);
        for (int sp = 0; sp < S; ++sp) next_mass[sp] += q * row[sp];
      }
    }
    state_mass.swap(next_mass);
  }
  return occ;
}

}  // namespace approach
