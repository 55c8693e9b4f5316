// Experiment driver. Each subcommand resolves its configuration from, in
// increasing precedence: built-in defaults, APPROACH_RL_SEED (seed only), the
// --config JSON file, and command-line flags. The resolved configuration is
// written next to the outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "approach/approachability.hpp"
#include "approach/cmdp.hpp"
#include "approach/environments.hpp"
#include "approach/errors.hpp"
#include "approach/io.hpp"
#include "approach/oracle.hpp"
#include "approach/planner.hpp"
#include "approach/rfe_linear.hpp"
#include "approach/rfe_tabular.hpp"
#include "approach/vmg.hpp"

namespace fs = std::filesystem;
using approach::ConfigError;
using approach::Json;

namespace {

struct Field {
  std::string key;
  Json fallback;
  std::string help;
};

using Schema = std::vector<Field>;

const Schema kCommon = {
    {"seed", 0, "master seed (falls back to APPROACH_RL_SEED)"},
    {"out_dir", ".", "directory for outputs"},
    {"plot_script", false, "also write a matplotlib script for the metrics CSV"},
};

std::map<std::string, Schema> schemas() {
  return {
      {"generate",
       {{"family", "random-dense",
         "random-dense | chain | two-arm | resource-gridworld | random-linear | random-game"},
        {"S", 5, "states"},
        {"A", 3, "actions (min-player actions for games)"},
        {"B", 2, "max-player actions"},
        {"H", 4, "horizon"},
        {"d", 3, "return dimension"},
        {"d_lin", 4, "feature dimension"},
        {"width", 3, "gridworld width"},
        {"height", 3, "gridworld height"},
        {"noise", 0.0, "return noise level in [0, 1]"},
        {"out", "model.json", "model file to write"},
        {"cost_out", "", "optional cost table to write"}}},
      {"explore-tabular",
       {{"model", Json(), "model JSON file or generator object"},
        {"K", 10000, "exploration episodes"},
        {"c_beta", 0.1, "bonus constant"},
        {"delta", 0.1, "confidence parameter"},
        {"out", "empirical.json", "empirical model file (relative to out_dir)"},
        {"metrics_csv", "explore.csv", "per-episode log (relative to out_dir)"}}},
      {"explore-linear",
       {{"model", Json(), "linear model JSON file or generator object"},
        {"K", 2000, "exploration episodes"},
        {"c_beta", 0.1, "bonus constant"},
        {"delta", 0.1, "confidence parameter"},
        {"theta", Json(), "optional preference vector to plan for after exploration"},
        {"metrics_csv", "explore_linear.csv", "per-episode log (relative to out_dir)"}}},
      {"approach",
       {{"model", Json(), "model JSON file or generator object"},
        {"set", Json(), "target set descriptor (JSON object, inline JSON or file)"},
        {"K", 10000, "exploration episodes"},
        {"T", 1000, "approachability iterations"},
        {"n_roll", 1, "rollouts averaged per iteration"},
        {"c_beta", 0.1, "bonus constant"},
        {"delta", 0.1, "confidence parameter"},
        {"oracle", false, "also compute the Frank-Wolfe reference distance"},
        {"metrics_csv", "approach.csv", "per-iteration log (relative to out_dir)"}}},
      {"cmdp",
       {{"model", Json(), "model JSON file or generator object"},
        {"cost", Json(), "cost table (JSON array or file)"},
        {"set", Json(), "target set descriptor"},
        {"epsilon", 0.5, "accuracy"},
        {"delta", 0.1, "confidence parameter"},
        {"K", 10000, "exploration episodes"},
        {"T", 1000, "approachability iterations per search step"},
        {"c_est", 1.0, "estimation-episode constant"},
        {"c_beta", 0.1, "bonus constant"},
        {"range", "full", "initial cost interval: full = [-H, H], nonnegative = [0, H]"},
        {"metrics_csv", "cmdp.csv", "search log (relative to out_dir)"}}},
      {"vmg-approach",
       {{"game", Json(), "game JSON file or generator object"},
        {"set", Json(), "target set descriptor"},
        {"K", 10000, "exploration episodes"},
        {"T", 1000, "approachability iterations"},
        {"c_beta", 0.1, "bonus constant"},
        {"delta", 0.1, "confidence parameter"},
        {"adversary", "br", "fixed | uniform | br"},
        {"metrics_csv", "vmg.csv", "per-iteration log (relative to out_dir)"}}},
      {"oracle",
       {{"op", "min-distance", "min-distance | exhaustive | constrained | minimax | lmo"},
        {"model", Json(), "model JSON file or generator object"},
        {"game", Json(), "game JSON file or generator object (minimax)"},
        {"set", Json(), "target set descriptor"},
        {"cost", Json(), "cost table (constrained)"},
        {"direction", Json(), "direction vector (lmo)"},
        {"tol", 1e-4, "tolerance"},
        {"out", "oracle.json", "result file (relative to out_dir)"}}},
  };
}

[[noreturn]] void config_fail(const std::string& what, const std::string& field) {
  throw ConfigError(what, field);
}

std::string flag_name(const std::string& key) {
  std::string out = key;
  for (char& c : out)
    if (c == '_') c = '-';
  return "--" + out;
}

// Interprets a flag value according to the type of the field's default.
Json parse_flag(const std::string& key, const Json& fallback, const std::string& text) {
  try {
    if (fallback.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      config_fail("expected true or false", key);
    }
    if (fallback.is_number_integer()) {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size()) config_fail("expected an integer", key);
      return v;
    }
    if (fallback.is_number()) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) config_fail("expected a number", key);
      return v;
    }
  } catch (const std::logic_error&) {
    config_fail("cannot parse '" + text + "'", key);
  }
  if (fallback.is_null() && !text.empty() && (text[0] == '{' || text[0] == '[')) {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error&) {
      config_fail("invalid inline JSON", key);
    }
  }
  return text;
}

void check_type(const std::string& key, const Json& fallback, const Json& value) {
  if (fallback.is_null() || value.is_null()) return;
  const bool ok = (fallback.is_boolean() && value.is_boolean()) ||
                  (fallback.is_number_integer() && value.is_number_integer()) ||
                  (fallback.is_number_float() && value.is_number()) ||
                  (fallback.is_string() && value.is_string());
  if (!ok) config_fail("field has the wrong type", key);
}

Json resolve(const std::string& command, const Schema& schema, const std::string& config_path,
             const std::map<std::string, std::string>& flags) {
  Json cfg = Json::object();
  for (const Field& f : schema) cfg[f.key] = f.fallback;
  if (const char* env = std::getenv("APPROACH_RL_SEED")) cfg["seed"] = parse_flag("seed", 0, env);
  if (!config_path.empty()) {
    const Json file = approach::read_json_file(config_path);
    if (!file.is_object()) config_fail("config must be a JSON object", "config");
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != command) config_fail("config is for a different subcommand", "command");
        continue;
      }
      auto it = std::find_if(schema.begin(), schema.end(), [&](const Field& f) { return f.key == key; });
      if (it == schema.end()) config_fail("unknown field '" + key + "'", key);
      check_type(key, it->fallback, value);
      cfg[key] = value;
    }
  }
  for (const auto& [key, text] : flags) {
    auto it = std::find_if(schema.begin(), schema.end(), [&](const Field& f) { return f.key == key; });
    cfg[key] = parse_flag(key, it->fallback, text);
  }
  if (cfg["seed"].is_number_integer() && cfg["seed"].get<long long>() < 0)
    config_fail("seed must be nonnegative", "seed");
  cfg["command"] = command;
  return cfg;
}

// Accepts an inline object/array, or a string naming a JSON file.
Json load_inline_or_file(const Json& v, const std::string& key) {
  if (v.is_null()) config_fail("missing required field '" + key + "'", key);
  if (v.is_string()) return approach::read_json_file(v.get<std::string>());
  return v;
}

std::int64_t positive_int(const Json& cfg, const std::string& key) {
  const auto v = cfg.at(key).get<long long>();
  if (v < 1) config_fail(key + " must be positive", key);
  return v;
}

double positive_double(const Json& cfg, const std::string& key) {
  const double v = cfg.at(key).get<double>();
  if (!(v > 0.0)) config_fail(key + " must be positive", key);
  return v;
}

std::uint64_t master_seed(const Json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

int gen_int(const Json& desc, const std::string& key, int fallback) {
  auto it = desc.find(key);
  if (it == desc.end()) return fallback;
  if (!it->is_number_integer()) config_fail("expected an integer", "model." + key);
  return it->get<int>();
}

approach::NoiseLaw gen_noise(const Json& desc) {
  auto it = desc.find("noise");
  if (it == desc.end()) return {};
  if (!it->is_number()) config_fail("expected a number", "model.noise");
  return approach::NoiseLaw{it->get<double>()};
}

std::uint64_t gen_seed(const Json& desc, std::uint64_t fallback) {
  auto it = desc.find("seed");
  if (it == desc.end()) return fallback;
  if (!it->is_number_unsigned()) config_fail("expected a nonnegative integer", "model.seed");
  return it->get<std::uint64_t>();
}

approach::TabularVMDP generate_tabular(const Json& desc, std::uint64_t seed) {
  const Json& fam = desc.contains("family") ? desc["family"] : Json();
  if (!fam.is_string()) config_fail("generator needs a family", "model.family");
  const std::string family = fam.get<std::string>();
  const std::uint64_t s = gen_seed(desc, seed);
  if (family == "random-dense")
    return approach::random_dense(gen_int(desc, "S", 5), gen_int(desc, "A", 3), gen_int(desc, "H", 4),
                                  gen_int(desc, "d", 3), s, gen_noise(desc));
  if (family == "chain")
    return approach::chain(gen_int(desc, "S", 4), gen_int(desc, "H", 4), gen_int(desc, "d", 2));
  if (family == "two-arm") return approach::two_arm();
  if (family == "resource-gridworld")
    return approach::resource_gridworld(gen_int(desc, "width", 3), gen_int(desc, "height", 3),
                                        gen_int(desc, "H", 6), gen_int(desc, "d", 3), s);
  config_fail("unknown model family '" + family + "'", "model.family");
}

approach::TabularVMDP load_model(const Json& cfg) {
  const Json& m = cfg.at("model");
  if (m.is_null()) config_fail("missing required field 'model'", "model");
  if (m.is_object() && m.contains("family")) return generate_tabular(m, master_seed(cfg));
  return approach::model_from_json(load_inline_or_file(m, "model"));
}

approach::TabularVMG load_game(const Json& cfg) {
  const Json& g = cfg.at("game");
  if (g.is_null()) config_fail("missing required field 'game'", "game");
  if (g.is_object() && g.contains("family")) {
    if (g["family"] != "random-game") config_fail("unknown game family", "game.family");
    return approach::random_game(gen_int(g, "S", 3), gen_int(g, "A", 2), gen_int(g, "B", 2),
                                 gen_int(g, "H", 3), gen_int(g, "d", 2),
                                 gen_seed(g, master_seed(cfg)), gen_noise(g));
  }
  return approach::game_from_json(load_inline_or_file(g, "game"));
}

approach::LinearVMDP load_linear(const Json& cfg) {
  const Json& m = cfg.at("model");
  if (m.is_null()) config_fail("missing required field 'model'", "model");
  if (m.is_object() && m.contains("family")) {
    if (m["family"] == "random-linear")
      return approach::random_linear(gen_int(m, "S", 5), gen_int(m, "A", 3), gen_int(m, "H", 4),
                                     gen_int(m, "d", 2), gen_int(m, "d_lin", 4),
                                     gen_seed(m, master_seed(cfg)), gen_noise(m));
    return approach::one_hot_linear(generate_tabular(m, master_seed(cfg)));
  }
  return approach::linear_from_json(load_inline_or_file(m, "model"));
}

approach::ConvexSet load_set(const Json& cfg) {
  return approach::set_from_json(load_inline_or_file(cfg.at("set"), "set"));
}

struct Outputs {
  fs::path dir;

  fs::path file(const Json& cfg, const std::string& key) const {
    const fs::path p = cfg.at(key).get<std::string>();
    return p.is_absolute() ? p : dir / p;
  }
};

Outputs prepare_outputs(const Json& cfg) {
  Outputs out{cfg.at("out_dir").get<std::string>()};
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) config_fail("cannot create output directory", "out_dir");
  approach::write_text_file((out.dir / "resolved_config.json").string(), cfg.dump(2) + "\n");
  return out;
}

void write_plot_script(const Json& cfg, const Outputs& out, const fs::path& csv,
                       const std::string& x, const std::string& y) {
  if (!cfg.at("plot_script").get<bool>()) return;
  const std::string script = fmt::format(
      "import pandas as pd\n"
      "import matplotlib.pyplot as plt\n\n"
      "df = pd.read_csv(\"{}\")\n"
      "df.plot(x=\"{}\", y=\"{}\")\n"
      "plt.savefig(\"{}\")\n",
      csv.filename().string(), x, y, csv.stem().string() + ".png");
  approach::write_text_file((out.dir / "plot.py").string(), script);
}

std::string num(double v) { return fmt::format("{}", v); }

int run_generate(const Json& cfg) {
  const Outputs out = prepare_outputs(cfg);
  const std::string family = cfg.at("family").get<std::string>();
  const std::uint64_t seed = master_seed(cfg);
  Json desc = cfg;
  desc["seed"] = seed;
  Json model;
  std::optional<Json> cost;
  if (family == "random-linear") {
    model = approach::linear_to_json(approach::random_linear(
        cfg["S"].get<int>(), cfg["A"].get<int>(), cfg["H"].get<int>(), cfg["d"].get<int>(),
        cfg["d_lin"].get<int>(), seed, approach::NoiseLaw{cfg["noise"].get<double>()}));
  } else if (family == "random-game") {
    model = approach::game_to_json(approach::random_game(
        cfg["S"].get<int>(), cfg["A"].get<int>(), cfg["B"].get<int>(), cfg["H"].get<int>(),
        cfg["d"].get<int>(), seed, approach::NoiseLaw{cfg["noise"].get<double>()}));
  } else {
    const approach::TabularVMDP m = generate_tabular(desc, seed);
    model = approach::model_to_json(m);
    cost = approach::cost_to_json(
        m, family == "two-arm" ? approach::two_arm_cost() : approach::random_cost(m, seed ^ 0x5eedULL));
  }
  approach::write_text_file(out.file(cfg, "out").string(), model.dump() + "\n");
  const std::string cost_out = cfg.at("cost_out").get<std::string>();
  if (!cost_out.empty()) {
    if (!cost) config_fail("cost tables exist only for single-agent families", "cost_out");
    approach::write_text_file(out.file(cfg, "cost_out").string(), cost->dump() + "\n");
  }
  return 0;
}

int run_explore_tabular(const Json& cfg) {
  const approach::TabularVMDP model = load_model(cfg);
  const std::int64_t K = positive_int(cfg, "K");
  const auto bonus = approach::make_bonus_config(model.reward_dim(), model.num_states(),
                                                 model.num_actions(), K, model.horizon(),
                                                 cfg.at("delta").get<double>(),
                                                 cfg.at("c_beta").get<double>());
  const Outputs out = prepare_outputs(cfg);
  approach::Rng rng = approach::Rng(master_seed(cfg)).split(1);
  const approach::ExploreResult res = approach::vi_zero_explore(model, K, bonus, rng);

  std::string csv = "episode,v_tilde,delta\n";
  for (const auto& e : res.log) csv += fmt::format("{},{},{}\n", e.episode, num(e.v_tilde), num(e.delta));
  const fs::path csv_path = out.file(cfg, "metrics_csv");
  approach::write_text_file(csv_path.string(), csv);
  approach::write_text_file(out.file(cfg, "out").string(),
                            approach::empirical_to_json(res.empirical).dump() + "\n");
  const Json result{{"snapshot_episode", res.snapshot_episode},
                    {"final_v_tilde", res.log.back().v_tilde},
                    {"iota", bonus.iota}};
  approach::write_text_file((out.dir / "result.json").string(), result.dump(2) + "\n");
  write_plot_script(cfg, out, csv_path, "episode", "v_tilde");
  return 0;
}

int run_explore_linear(const Json& cfg) {
  const approach::LinearVMDP model = load_linear(cfg);
  const std::int64_t K = positive_int(cfg, "K");
  const double beta = approach::linear_beta(model.feature_dim(), model.reward_dim(), K,
                                            model.horizon(), cfg.at("delta").get<double>(),
                                            cfg.at("c_beta").get<double>());
  const Outputs out = prepare_outputs(cfg);
  approach::Rng rng = approach::Rng(master_seed(cfg)).split(1);
  approach::LinearExploreResult res = approach::linear_explore(model, K, beta, rng);

  std::string csv = "episode,v_tilde\n";
  for (std::size_t k = 0; k < res.v_tilde.size(); ++k)
    csv += fmt::format("{},{}\n", k + 1, num(res.v_tilde[k]));
  const fs::path csv_path = out.file(cfg, "metrics_csv");
  approach::write_text_file(csv_path.string(), csv);

  Json result{{"beta", beta}, {"samples", res.dataset.samples.size()}};
  Json traces = Json::array();
  for (const auto& g : res.gram) traces.push_back(g.matrix().trace());
  result["gram_trace"] = traces;
  if (!cfg.at("theta").is_null()) {
    const Json& jt = cfg.at("theta");
    if (!jt.is_array() || static_cast<int>(jt.size()) != model.reward_dim())
      config_fail("theta must have d entries", "theta");
    Eigen::VectorXd theta(model.reward_dim());
    for (int i = 0; i < model.reward_dim(); ++i) theta[i] = jt[i].get<double>();
    if (theta.norm() > 1.0 + 1e-9) config_fail("theta must lie in the unit ball", "theta");
    const approach::LinearRewardFree planner(std::move(res.dataset), beta, K);
    const approach::LinearPlan plan = planner.plan_values(theta);
    const double achieved = approach::scalarized_policy_value(
        approach::ScalarizedView(model.tabular(), theta), plan.policy);
    const double optimal =
        approach::value_iteration(approach::ScalarizedView(model.tabular(), theta)).initial_value();
    result["plan"] = {{"v_hat", plan.initial_value()},
                      {"true_value", achieved},
                      {"optimal_value", optimal},
                      {"policy", approach::policy_to_json(plan.policy)}};
  }
  approach::write_text_file((out.dir / "result.json").string(), result.dump(2) + "\n");
  write_plot_script(cfg, out, csv_path, "episode", "v_tilde");
  return 0;
}

int run_approach(const Json& cfg) {
  const approach::TabularVMDP model = load_model(cfg);
  const approach::ConvexSet set = load_set(cfg);
  if (set.dim() != model.reward_dim()) config_fail("set dimension differs from d", "set");
  const std::int64_t K = positive_int(cfg, "K");
  approach::ApproachConfig app;
  app.iterations = positive_int(cfg, "T");
  app.rollouts_per_iteration = static_cast<int>(positive_int(cfg, "n_roll"));
  const auto bonus = approach::make_bonus_config(model.reward_dim(), model.num_states(),
                                                 model.num_actions(), K, model.horizon(),
                                                 cfg.at("delta").get<double>(),
                                                 cfg.at("c_beta").get<double>());
  const Outputs out = prepare_outputs(cfg);
  const approach::Rng master(master_seed(cfg));
  approach::Rng explore_rng = master.split(1);
  approach::Rng run_rng = master.split(2);
  approach::ExploreResult explored = approach::vi_zero_explore(model, K, bonus, explore_rng);
  const approach::TabularRewardFree planner(std::move(explored.empirical), K);
  const approach::ApproachResult res = approach::run_approachability(model, planner, set, app, run_rng);

  std::string csv = "t";
  for (int i = 0; i < model.reward_dim(); ++i) csv += fmt::format(",theta_{}", i + 1);
  csv += ",utility,running_distance\n";
  for (const auto& it : res.log) {
    csv += fmt::format("{}", it.t);
    for (Eigen::Index i = 0; i < it.theta.size(); ++i) csv += "," + num(it.theta[i]);
    csv += fmt::format(",{},{}\n", num(it.utility), num(it.running_distance));
  }
  const fs::path csv_path = out.file(cfg, "metrics_csv");
  approach::write_text_file(csv_path.string(), csv);

  const Eigen::VectorXd value = approach::exact_policy_value(model, res.policy);
  Json result{{"value", approach::vector_to_json(value)},
              {"distance", approach::distance(set, value)},
              {"exploration_episodes", res.exploration_episodes},
              {"rollout_episodes", res.rollout_episodes}};
  if (cfg.at("oracle").get<bool>())
    result["oracle_distance"] = approach::min_distance_fw(model, set).distance;
  approach::write_text_file((out.dir / "result.json").string(), result.dump(2) + "\n");
  write_plot_script(cfg, out, csv_path, "t", "running_distance");
  return 0;
}

int run_cmdp(const Json& cfg) {
  const approach::TabularVMDP model = load_model(cfg);
  const std::vector<double> cost =
      approach::cost_from_json(load_inline_or_file(cfg.at("cost"), "cost"), model);
  const approach::ConvexSet set = load_set(cfg);
  if (set.dim() != model.reward_dim()) config_fail("set dimension differs from d", "set");
  approach::CmdpConfig c;
  c.epsilon = positive_double(cfg, "epsilon");
  c.delta = positive_double(cfg, "delta");
  c.exploration_episodes = positive_int(cfg, "K");
  c.approach_iterations = positive_int(cfg, "T");
  c.estimation_constant = positive_double(cfg, "c_est");
  c.c_beta = positive_double(cfg, "c_beta");
  const std::string range = cfg.at("range").get<std::string>();
  if (range == "full")
    c.range = approach::CostRange::kFull;
  else if (range == "nonnegative")
    c.range = approach::CostRange::kNonnegative;
  else
    config_fail("range must be full or nonnegative", "range");
  const Outputs out = prepare_outputs(cfg);
  approach::Rng rng = approach::Rng(master_seed(cfg)).split(3);
  const approach::CmdpResult res = approach::solve_cmdp(model, cost, set, c, rng);

  std::string csv = "iter,L,R,mid,measured_distance,decision\n";
  for (const auto& s : res.log)
    csv += fmt::format("{},{},{},{},{},{}\n", s.iteration, num(s.L), num(s.R), num(s.mid),
                       num(s.measured_distance), s.feasible ? "feasible" : "infeasible");
  const fs::path csv_path = out.file(cfg, "metrics_csv");
  approach::write_text_file(csv_path.string(), csv);
  const Eigen::VectorXd value = approach::exact_policy_value(model, res.policy);
  const Json result{{"value", approach::vector_to_json(value)},
                    {"distance", approach::distance(set, value)},
                    {"cost", approach::exact_cost_value(model, cost, res.policy)},
                    {"L", res.L},
                    {"R", res.R},
                    {"total_episodes", res.total_episodes}};
  approach::write_text_file((out.dir / "result.json").string(), result.dump(2) + "\n");
  write_plot_script(cfg, out, csv_path, "iter", "mid");
  return 0;
}

int run_vmg(const Json& cfg) {
  const approach::TabularVMG game = load_game(cfg);
  const approach::ConvexSet set = load_set(cfg);
  if (set.dim() != game.reward_dim()) config_fail("set dimension differs from d", "set");
  const std::int64_t K = positive_int(cfg, "K");
  approach::ApproachConfig app;
  app.iterations = positive_int(cfg, "T");
  const std::string kind = cfg.at("adversary").get<std::string>();
  std::unique_ptr<approach::Adversary> adversary;
  if (kind == "fixed")
    adversary = std::make_unique<approach::FixedAdversary>(approach::Policy::deterministic(
        game.horizon(), game.num_states(), game.max_actions(),
        std::vector<int>(static_cast<std::size_t>(game.horizon()) * game.num_states(), 0)));
  else if (kind == "uniform")
    adversary = std::make_unique<approach::UniformAdversary>(game);
  else if (kind == "br")
    adversary = std::make_unique<approach::BestResponseAdversary>(game);
  else
    config_fail("adversary must be fixed, uniform or br", "adversary");
  const auto bonus = approach::make_game_bonus_config(game, K, cfg.at("delta").get<double>(),
                                                      cfg.at("c_beta").get<double>());
  const Outputs out = prepare_outputs(cfg);
  const approach::Rng master(master_seed(cfg));
  approach::Rng explore_rng = master.split(1);
  approach::Rng run_rng = master.split(2);
  approach::GameExploreResult explored = approach::vi_zero_mg_explore(game, K, bonus, explore_rng);
  const approach::TabularGameRewardFree planner(explored.empirical, K);
  const approach::GameApproachResult res =
      approach::run_approachability_mg(game, planner, set, app, *adversary, run_rng);

  std::string csv = "t,running_distance,max_gap\n";
  for (const auto& it : res.log)
    csv += fmt::format("{},{},{}\n", it.t, num(it.running_distance), num(it.max_gap));
  const fs::path csv_path = out.file(cfg, "metrics_csv");
  approach::write_text_file(csv_path.string(), csv);
  const Json result{{"average_value", approach::vector_to_json(res.average_value)},
                    {"distance", approach::distance(set, res.average_value)},
                    {"exploration_episodes", res.exploration_episodes},
                    {"rollout_episodes", res.rollout_episodes}};
  approach::write_text_file((out.dir / "result.json").string(), result.dump(2) + "\n");
  write_plot_script(cfg, out, csv_path, "t", "running_distance");
  return 0;
}

int run_oracle(const Json& cfg) {
  const std::string op = cfg.at("op").get<std::string>();
  const double tol = positive_double(cfg, "tol");
  Json result{{"op", op}};
  if (op == "minimax") {
    const approach::TabularVMG game = load_game(cfg);
    const approach::ConvexSet set = load_set(cfg);
    approach::MinimaxOptions mo;
    mo.fw.tol = tol;
    const approach::MinimaxBrackets b = approach::minimax_distance(game, set, mo);
    result.update({{"lower", b.lower}, {"upper", b.upper}, {"grid_value", b.grid_value}});
  } else {
    const approach::TabularVMDP model = load_model(cfg);
    if (op == "lmo") {
      const Json& jd = cfg.at("direction");
      if (!jd.is_array() || static_cast<int>(jd.size()) != model.reward_dim())
        config_fail("direction must have d entries", "direction");
      Eigen::VectorXd g(model.reward_dim());
      for (int i = 0; i < model.reward_dim(); ++i) g[i] = jd[i].get<double>();
      const approach::Vertex v = approach::lmo(model, g);
      result.update({{"value", approach::vector_to_json(v.value)},
                     {"policy", approach::policy_to_json(v.policy)}});
    } else {
      const approach::ConvexSet set = load_set(cfg);
      if (op == "min-distance") {
        const approach::DistanceResult r = approach::min_distance_fw(model, set, {tol});
        result.update({{"distance", r.distance},
                       {"value", approach::vector_to_json(r.value)},
                       {"gap", r.gap},
                       {"iterations", r.iterations},
                       {"witness", approach::mixture_to_json(r.witness)}});
      } else if (op == "exhaustive") {
        result["distance"] = approach::min_distance_exhaustive(model, set);
      } else if (op == "constrained") {
        const std::vector<double> cost =
            approach::cost_from_json(load_inline_or_file(cfg.at("cost"), "cost"), model);
        approach::ConstrainedOptions co;
        co.tol = tol;
        const approach::ConstrainedResult r = approach::constrained_optimum(model, cost, set, co);
        result.update({{"feasible", r.feasible},
                       {"cost", r.feasible ? Json(r.cost) : Json()},
                       {"distance", r.distance},
                       {"value", approach::vector_to_json(r.value)}});
      } else {
        config_fail("unknown oracle op '" + op + "'", "op");
      }
    }
  }
  const Outputs out = prepare_outputs(cfg);
  approach::write_text_file(out.file(cfg, "out").string(), result.dump(2) + "\n");
  return 0;
}

void report_error(const std::string& kind, const std::string& message, const std::string& field) {
  Json err{{"error", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approachability and reward-free RL experiments"};
  app.require_subcommand(1);
  const auto all = schemas();
  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::map<std::string, std::optional<std::string>>> raw;

  for (const auto& [name, fields] : all) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_paths[name], "JSON config file");
    auto& slots = raw[name];
    Schema full = fields;
    full.insert(full.end(), kCommon.begin(), kCommon.end());
    for (const Field& f : full) {
      slots[f.key];
      sub->add_option(flag_name(f.key), slots[f.key], f.help + " [default: " + f.fallback.dump() + "]");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what(), "");
    return 2;
  }

  for (const auto& [name, fields] : all) {
    if (!app.got_subcommand(name)) continue;
    Schema full = fields;
    full.insert(full.end(), kCommon.begin(), kCommon.end());
    std::map<std::string, std::string> flags;
    for (const auto& [key, value] : raw[name])
      if (value) flags[key] = *value;
    try {
      const Json cfg = resolve(name, full, config_paths[name], flags);
      if (name == "generate") return run_generate(cfg);
      if (name == "explore-tabular") return run_explore_tabular(cfg);
      if (name == "explore-linear") return run_explore_linear(cfg);
      if (name == "approach") return run_approach(cfg);
      if (name == "cmdp") return run_cmdp(cfg);
      if (name == "vmg-approach") return run_vmg(cfg);
      if (name == "oracle") return run_oracle(cfg);
    } catch (const ConfigError& e) {
      report_error("config", e.what(), e.field());
      return 2;
    } catch (const approach::InputError& e) {
      report_error("input", e.what(), "");
      return 2;
    } catch (const approach::ConvergenceError& e) {
      report_error("convergence", e.what(), "");
      return 1;
    } catch (const std::exception& e) {
      report_error("runtime", e.what(), "");
      return 1;
    }
  }
  return 0;
}
