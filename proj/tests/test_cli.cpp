#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("approach_rl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd =
      std::string("\"") + APPROACH_RL_PATH + "\" " + args + " 2> \"" + err_file.string() + "\" > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double last_running_distance(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return std::stod(last.substr(last.rfind(',') + 1));
}

const char* kApproachArgs =
    "approach --model '{\"family\":\"two-arm\"}' "
    "--set '{\"type\":\"hull\",\"vertices\":[[0,0]]}' --K 500 --T 1000 --seed 3 --oracle true";

TEST(Cli, GenerateIsDeterministic) {
  const fs::path a = fresh_dir("gen_a"), b = fresh_dir("gen_b");
  ASSERT_EQ(run_cli("generate --family random-dense --S 4 --seed 9 --out-dir " + a.string(), a / "err"), 0);
  ASSERT_EQ(run_cli("generate --family random-dense --S 4 --seed 9 --out-dir " + b.string(), b / "err"), 0);
  EXPECT_EQ(slurp(a / "model.json"), slurp(b / "model.json"));
  EXPECT_FALSE(slurp(a / "model.json").empty());
}

TEST(Cli, ApproachTwoArmNearOracle) {
  const fs::path dir = fresh_dir("approach");
  ASSERT_EQ(run_cli(std::string(kApproachArgs) + " --out-dir " + dir.string(), dir / "err"), 0)
      << slurp(dir / "err");
  const auto result = nlohmann::json::parse(slurp(dir / "result.json"));
  const double oracle = result.at("oracle_distance").get<double>();
  EXPECT_NEAR(oracle, std::sqrt(0.5), 1e-3);
  EXPECT_LE(last_running_distance(slurp(dir / "approach.csv")), oracle + 0.15);
  EXPECT_TRUE(fs::exists(dir / "resolved_config.json"));
}

TEST(Cli, RerunIsByteIdentical) {
  const fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
  ASSERT_EQ(run_cli(std::string(kApproachArgs) + " --out-dir " + a.string(), a / "err"), 0);
  ASSERT_EQ(run_cli(std::string(kApproachArgs) + " --out-dir " + b.string(), b / "err"), 0);
  EXPECT_EQ(slurp(a / "approach.csv"), slurp(b / "approach.csv"));
}

TEST(Cli, MalformedSetReportsField) {
  const fs::path dir = fresh_dir("bad_set");
  const int code = run_cli(
      "approach --model '{\"family\":\"two-arm\"}' "
      "--set '{\"type\":\"ball\",\"center\":[0,0],\"radius\":0}' --out-dir " + dir.string(),
      dir / "err");
  EXPECT_EQ(code, 2);
  const auto err = nlohmann::json::parse(slurp(dir / "err"));
  EXPECT_EQ(err.at("error"), "config");
  EXPECT_EQ(err.at("field"), "set.radius");
}

TEST(Cli, UnknownOptionIsUsageError) {
  const fs::path dir = fresh_dir("usage");
  EXPECT_EQ(run_cli("approach --bogus 1", dir / "err"), 2);
}

}  // namespace
