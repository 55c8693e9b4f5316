#include "approach/planner.hpp"

#include "approach/errors.hpp"

namespace approach {

ScalarizedView::ScalarizedView(const TabularVMDP& m, Eigen::VectorXd th)
    : model(m), theta(std::move(th)) {
  if (theta.size() != model.reward_dim()) throw InputError("theta has the wrong dimension");
  if (theta.norm() > 1.0 + 1e-9) throw InputError("theta lies outside the unit ball");
}

std::vector<double> scalarize(const TabularVMDP& model, const Eigen::VectorXd& theta) {
  if (theta.size() != model.reward_dim()) throw InputError("theta has the wrong dimension");
  std::vector<double> out(static_cast<std::size_t>(model.num_sa()));
  Eigen::Map<Eigen::RowVectorXd>(out.data(), model.num_sa()) =
      theta.transpose() * model.mean_returns();
  return out;
}

PlanResult value_iteration(const TabularVMDP& model, std::span<const double> reward) {
  const int S = model.num_states(), A = model.num_actions(), H = model.horizon();
  if (reward.size() != static_cast<std::size_t>(model.num_sa()))
    throw InputError("reward table has the wrong size");
  PlanResult res;
  res.horizon = H;
  res.num_states = S;
  res.num_actions = A;
  res.initial_state = model.initial_state();
  res.V.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  res.Q.assign(static_cast<std::size_t>(model.num_sa()), 0.0);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = res.V.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      int best_a = 0;
      double best = 0.0;
      for (int a = 0; a < A; ++a) {
        const int idx = model.sa_index(h, s, a);
        const auto row = model.transition(h, s, a);
        double q = reward[idx];
        for (int sp = 0; sp < S; ++sp) q += row[sp] * next[sp];
        res.Q[idx] = q;
        if (a == 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      res.V[static_cast<std::size_t>(h) * S + s] = best;
      greedy[static_cast<std::size_t>(h) * S + s] = best_a;
    }
  }
  res.policy = Policy::deterministic(H, S, A, greedy);
  return res;
}

PlanResult value_iteration(const ScalarizedView& view) {
  return value_iteration(view.model, scalarize(view.model, view.theta));
}

double scalarized_policy_value(const ScalarizedView& view, const Policy& policy) {
  return view.theta.dot(exact_policy_value(view.model, policy));
}

double evaluate_scalar(const TabularVMDP& model, std::span<const double> reward,
                       const Policy& policy) {
  check_compatible(model, policy);
  const int S = model.num_states(), A = model.num_actions();
  std::vector<double> next(S, 0.0), cur(S);
  for (int h = model.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double v = 0.0;
      for (int a = 0; a < A; ++a) {
        const double p = policy.prob(h, s, a);
        if (p == 0.0) continue;
        const auto row = model.transition(h, s, a);
        double q = reward[model.sa_index(h, s, a)];
        for (int sp = 0; sp < S; ++sp) q += row[sp] * next[sp];
        v += p * q;
      }
      cur[s] = v;
    }
    next.swap(cur);
  }
  return next[model.initial_state()];
}

}  // namespace approach
