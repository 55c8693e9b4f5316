#pragma once

#include <cstdint>
#include <vector>

#include "approach/rfe_linear.hpp"
#include "approach/vmdp.hpp"
#include "approach/vmg.hpp"

namespace approach {

/// Transition rows uniform-then-normalized, mean returns uniform in the unit ball.
TabularVMDP random_dense(int num_states, int num_actions, int horizon, int reward_dim,
                         std::uint64_t seed, NoiseLaw noise = {});

/// Deterministic line of states starting at 0. Action 0 moves right and
/// returns (s / (S - 1)) e_1; action 1 moves left and returns 0.5 e_2 (or
/// -0.5 e_1 when d = 1). S = 1 gives returns e_1 and 0.5 e_2.
TabularVMDP chain(int num_states, int horizon, int reward_dim);

/// S = 1, H = 1, A = 2: action 0 returns (1, 0), action 1 returns (0, 1).
TabularVMDP two_arm();
/// Cost table paired with two_arm(): action 0 costs 1, action 1 costs 0.
std::vector<double> two_arm_cost();

/// Grid of width x height cells, actions {stay, up, down, left, right}, a slip
/// to "stay" with probability 0.1. Returns are (goal reward, consumption of
/// d - 1 resources) / sqrt(d); consumption rates per cell come from the seed.
TabularVMDP resource_gridworld(int width, int height, int horizon, int reward_dim,
                               std::uint64_t seed);

/// Costs uniform in [-1, 1], flat in (h, s, a) order.
std::vector<double> random_cost(const TabularVMDP& model, std::uint64_t seed);

/// Probability-vector features, mu_h columns that are distributions and W_h
/// columns in the unit ball.
LinearVMDP random_linear(int num_states, int num_actions, int horizon, int reward_dim,
                         int feature_dim, std::uint64_t seed, NoiseLaw noise = {});

/// Random dense game over A * B joint actions.
TabularVMG random_game(int num_states, int min_actions, int max_actions, int horizon,
                       int reward_dim, std::uint64_t seed, NoiseLaw noise = {});

}  // namespace approach
