#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "wavebound/io.hpp"

namespace fs = std::filesystem;
using wavebound::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / "wavebound_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const json& cfg) {
  const auto p = dir / "config.json";
  std::ofstream(p) << cfg.dump(2);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WAVEBOUND_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

const json kVerifyConfig = json::parse(R"({
  "plan": {"n": 1, "k0p": 2, "kj": [2]},
  "grid_points": 33, "replicates": 1000, "seed": 4242
})");

}  // namespace

TEST(Cli, ConstantsLedgerHasFiniteHeadlineKeys) {
  const auto d = scratch("constants");
  ASSERT_EQ(run_cli("constants --config " + write_config(d, json::object()).string() + " --output " + d.string()), 0);
  const auto j = load(d / "constants.json");
  for (const char* key : {"A", "B", "C", "B0", "B1", "B2", "sigma_c"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    ASSERT_TRUE(j.at(key).is_number()) << key;
    EXPECT_TRUE(std::isfinite(j.at(key).get<double>())) << key;
  }
  EXPECT_TRUE(j.contains("meta"));
  // The ledger round-trips into the originating type.
  const auto b = wavebound::strip_meta(j).get<wavebound::BoundConstants>();
  EXPECT_EQ(json(b), wavebound::strip_meta(j));
}

TEST(Cli, BoundWithInjectedConstants) {
  const auto d = scratch("bound");
  const json cfg{{"plan", {{"n", 1}, {"k0p", 4}, {"kj", {4}}}},
                 {"inject_constants", {{"A", 1}, {"B", 1}, {"C", 1}, {"sigma_c", 1}}}};
  ASSERT_EQ(run_cli("bound --config " + write_config(d, cfg).string() + " --output " + d.string()), 0);
  const auto j = load(d / "bound.json");
  EXPECT_NEAR(j.at("tail_bound").at("epsilon").get<double>(), 1.707107, 1e-6);
  EXPECT_NEAR(j.at("tail_bound").at("epsilon").get<double>(), 1.0 + std::sqrt(0.5), 1e-9);
}

TEST(Cli, PlanSubcommandReturnsFeasiblePlan) {
  const auto d = scratch("plan");
  const json cfg{{"target", {{"u", 5000.0}, {"p", 0.05}}}};
  ASSERT_EQ(run_cli("plan --config " + write_config(d, cfg).string() + " --output " + d.string()), 0);
  const auto r = wavebound::strip_meta(load(d / "plan.json")).get<wavebound::PlanResult>();
  EXPECT_LE(r.probability, 0.05);
  EXPECT_EQ(r.terms, wavebound::total_terms(r.plan));
}

TEST(Cli, CheckPassesForMeyerGaussian) {
  const auto d = scratch("check");
  ASSERT_EQ(run_cli("check --config " + write_config(d, json::object()).string() + " --output " + d.string()), 0);
  EXPECT_TRUE(load(d / "check.json").at("all_satisfied").get<bool>());
}

TEST(Cli, SimulateWritesHeaderedCsv) {
  const auto d = scratch("simulate");
  const json cfg{{"plan", {{"n", 1}, {"k0p", 1}, {"kj", {1}}}}, {"grid_points", 5}, {"replicates", 3}};
  ASSERT_EQ(run_cli("simulate --config " + write_config(d, cfg).string() + " --output " + d.string()), 0);
  std::istringstream in(slurp(d / "paths.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "replicate,t,x,x_n");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 15);
}

TEST(Cli, VerifyIsReproducibleAcrossRunsAndThreads) {
  const auto a = scratch("verify_a"), b = scratch("verify_b"), c = scratch("verify_c");
  const auto cfg = write_config(a, kVerifyConfig);
  ASSERT_EQ(run_cli("verify --config " + cfg.string() + " --output " + a.string() + " --threads 1"), 0);
  ASSERT_EQ(run_cli("verify --config " + cfg.string() + " --output " + b.string() + " --threads 1"), 0);
  ASSERT_EQ(run_cli("verify --config " + cfg.string() + " --output " + c.string() + " --threads 4"), 0);
  const auto ja = wavebound::strip_meta(load(a / "verify.json")).dump();
  EXPECT_EQ(ja, wavebound::strip_meta(load(b / "verify.json")).dump());
  EXPECT_EQ(ja, wavebound::strip_meta(load(c / "verify.json")).dump());
  EXPECT_EQ(slurp(a / "replicates.csv"), slurp(b / "replicates.csv"));
  EXPECT_EQ(slurp(a / "replicates.csv"), slurp(c / "replicates.csv"));
  EXPECT_TRUE(load(a / "verify.json").at("stochastic_dominance").get<bool>());
  // A different seed gives different replicates.
  const auto e = scratch("verify_e");
  ASSERT_EQ(run_cli("verify --config " + cfg.string() + " --output " + e.string() + " --seed 5"), 0);
  EXPECT_NE(slurp(a / "replicates.csv"), slurp(e / "replicates.csv"));
}

TEST(Cli, ExitCodes) {
  const auto d = scratch("codes");
  EXPECT_EQ(run_cli("constants --config " + (d / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("constants --config " + write_config(d, json{{"beta", 0.4}}).string()), 2);
  EXPECT_EQ(run_cli("bound --config " + write_config(d, json::object()).string() + " --output " + d.string()), 2);
  EXPECT_EQ(run_cli("plan --config " + write_config(d, json::object()).string() + " --output " + d.string()), 2);
  EXPECT_EQ(run_cli("frobnicate --config x"), 2);
  // Unreachable target: the certified tail never falls below p at moderate u.
  EXPECT_EQ(run_cli("plan --config " + write_config(d, json{{"target", {{"u", 1.0}, {"p", 0.01}}}}).string() +
                    " --output " + d.string()),
            4);
  // Power-law spectrum fails the moment conditions.
  EXPECT_EQ(run_cli("check --config " +
                    write_config(d, json{{"model", {{"kind", "exponential"}, {"parameters", {{"lambda", 1.0}}}}}})
                        .string() +
                    " --output " + d.string()),
            3);
}
