#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cli/commands.h"
#include "cli/config.h"
#include "oti/errors.h"

namespace oti::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("oti_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunManifest manifest(const std::string& command, const std::string& dir) {
    RunManifest mf;
    mf.command = command;
    mf.output_dir = root_ / dir;
    mf.overrides = {"T=4000"};
    mf.runs = 3;
    return mf;
  }

  int run(const RunManifest& mf) {
    log_.str("");
    return run_manifest(mf, log_);
  }

  fs::path root_;
  std::ostringstream log_;
};

TEST(ParseConfig, EmptyConfigGivesDefaults) {
  const auto cfg = parse_config_text("", {});
  EXPECT_EQ(cfg.sim.horizon, 100000);
  EXPECT_EQ(cfg.sim.delta, 0.01);
  EXPECT_EQ(cfg.sim.alpha, 2.0);
  EXPECT_EQ(cfg.sim.runs, 100);
  EXPECT_EQ(cfg.sim.kappa_steps(), 50000);
  EXPECT_EQ(cfg.sim.cb_variant, CbVariant::kSimplified);
  ASSERT_EQ(cfg.sim.behaviors.size(), 1u);
  EXPECT_EQ(cfg.sim.behaviors[0].kind, IncentiveBehavior::Kind::kAlwaysFollow);
  EXPECT_FALSE(cfg.sim.never_ban);
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(ParseConfig, OverridesTakePrecedence) {
  const auto cfg = parse_config_text("[sim]\ndelta = 0.05\n", {"delta=0.001", "generator.K=12"});
  EXPECT_EQ(cfg.sim.delta, 0.001);
  EXPECT_EQ(cfg.generator.num_arms, 12);
}

TEST(ParseConfig, ReadsAllSections) {
  const auto cfg = parse_config_text(
      "# experiment\n"
      "[sim]\nT = 20000\nkappa = quarter\ncb_variant = full\nruns = 7\nseed = 5\nnever_ban = true\n"
      "[agents]\nbehavior = stochastic_follow\np_follow = 0.8\n"
      "[sweep]\ndeltas = 0.1, 0.01, 0.001\nm_values = 2, 4\n"
      "[ucb_bound]\nlambda = 5000\nruns = 10\nmeans = 0.8, 0.2\n"
      "[lemma1]\nagent = 2\nrefuse_from = 15001\n",
      {});
  EXPECT_EQ(cfg.sim.horizon, 20000);
  EXPECT_EQ(cfg.sim.kappa_steps(), 5000);
  EXPECT_EQ(cfg.sim.cb_variant, CbVariant::kFull);
  EXPECT_EQ(cfg.sim.runs, 7);
  EXPECT_EQ(cfg.sim.master_seed, 5u);
  EXPECT_TRUE(cfg.sim.never_ban);
  EXPECT_EQ(cfg.sim.behaviors[0].kind, IncentiveBehavior::Kind::kStochasticFollow);
  EXPECT_EQ(cfg.sim.behaviors[0].p_follow, 0.8);
  EXPECT_EQ(cfg.deltas, (std::vector<double>{0.1, 0.01, 0.001}));
  EXPECT_EQ(cfg.m_values, (std::vector<int>{2, 4}));
  EXPECT_EQ(cfg.ucb_lambda, 5000);
  EXPECT_EQ(cfg.ucb_means, (std::vector<double>{0.8, 0.2}));
  EXPECT_EQ(cfg.lemma1_agent, 1);
  EXPECT_EQ(cfg.lemma1_refuse_from, 15001);
}

TEST(ParseConfig, SmallAlphaWarns) {
  const auto cfg = parse_config_text("", {"alpha=1.0"});
  EXPECT_EQ(cfg.sim.alpha, 1.0);
  EXPECT_FALSE(cfg.warnings.empty());
}

TEST(ParseConfig, StrictSchema) {
  EXPECT_THROW(parse_config_text("[sim]\nhorizon_typo = 3\n", {}), ConfigError);
  EXPECT_THROW(parse_config_text("[nonsense]\nx = 1\n", {}), ConfigError);
  EXPECT_THROW(parse_config_text("", {"delta"}), ConfigError);
  EXPECT_THROW(parse_config_text("", {"delta=2"}), ConfigError);
  try {
    parse_config_text("[sim]\nruns = many\n", {});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("runs"), std::string::npos);
  }
}

TEST(ParseConfig, MissingFileIsAnError) {
  EXPECT_THROW(parse_config(fs::path("/nonexistent/oti.ini"), {}), ConfigError);
}

TEST_F(CliRun, SimulateWritesOutputs) {
  ASSERT_EQ(run(manifest("simulate", "sim")), kExitOk) << log_.str();
  for (const char* f : {"episodes.csv", "c_pair.csv", "free_pulls.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(root_ / "sim" / f)) << f;
  }
  const auto episodes = slurp(root_ / "sim" / "episodes.csv");
  EXPECT_EQ(episodes.rfind("seed,k_hat,correct,C_total,S_final_size,confidence_violated\n", 0), 0u);
  EXPECT_EQ(std::count(episodes.begin(), episodes.end(), '\n'), 4);
}

TEST_F(CliRun, RefusesToOverwriteWithoutForce) {
  auto mf = manifest("simulate", "sim");
  ASSERT_EQ(run(mf), kExitOk);
  EXPECT_EQ(run(mf), kExitUsage);
  mf.force = true;
  EXPECT_EQ(run(mf), kExitOk);
}

TEST_F(CliRun, OutputsAreByteIdenticalAcrossRuns) {
  ASSERT_EQ(run(manifest("simulate", "a")), kExitOk);
  ASSERT_EQ(run(manifest("simulate", "b")), kExitOk);
  for (const char* f : {"episodes.csv", "c_pair.csv", "free_pulls.csv"}) {
    EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
  }
}

TEST_F(CliRun, GeneratedInstanceRoundTripsThroughSimulate) {
  auto gen = manifest("generate-instance", "gen");
  gen.overrides = {"generator.K=4", "generator.M=3", "generator.base_low=0.2",
                   "generator.base_high=0.8", "generator.dmin_low=0.05", "generator.dmin_high=0.3"};
  ASSERT_EQ(run(gen), kExitOk) << log_.str();
  const auto instance = root_ / "gen" / "instance.txt";
  ASSERT_TRUE(fs::exists(instance));

  auto a = manifest("simulate", "a");
  a.instance = instance;
  auto b = manifest("simulate", "b");
  b.instance = instance;
  ASSERT_EQ(run(a), kExitOk) << log_.str();
  ASSERT_EQ(run(b), kExitOk);
  EXPECT_EQ(slurp(root_ / "a" / "episodes.csv"), slurp(root_ / "b" / "episodes.csv"));
  EXPECT_EQ(slurp(root_ / "a" / "c_pair.csv"), slurp(root_ / "b" / "c_pair.csv"));
}

TEST_F(CliRun, ExhaustedGenerationExitsWithThree) {
  auto gen = manifest("generate-instance", "gen");
  gen.overrides = {"generator.dmin_low=0.5", "generator.dmin_high=0.6",
                   "generator.max_attempts=5"};
  EXPECT_EQ(run(gen), kExitGenerationExhausted);
}

TEST_F(CliRun, FailedCheckExitsWithTwo) {
  // Every agent agrees and the gap is huge: no incentives at any delta, so
  // the regression check cannot pass.
  const auto inst = root_ / "easy.txt";
  std::ofstream(inst) << "[instance]\nM = 4\nK = 2\n[means]\n0.95 0.05\n0.95 0.05\n0.95 0.05\n0.95 0.05\n";
  auto mf = manifest("sweep-delta", "sweep");
  mf.instance = inst;
  mf.overrides = {"T=2000"};
  EXPECT_EQ(run(mf), kExitCheckFailed) << log_.str();
  EXPECT_TRUE(fs::exists(root_ / "sweep" / "verdict.json"));
}

TEST_F(CliRun, SmallAlphaIsRejectedByBoundCheck) {
  auto mf = manifest("verify-ucb-bound", "ucb");
  mf.overrides = {"alpha=1.0", "ucb_bound.lambda=1000", "ucb_bound.runs=5"};
  EXPECT_EQ(run(mf), kExitUsage);
  EXPECT_NE(log_.str().find("warning"), std::string::npos);
}

TEST_F(CliRun, UcbBoundCheckPasses) {
  auto mf = manifest("verify-ucb-bound", "ucb");
  mf.overrides = {"ucb_bound.lambda=5000", "ucb_bound.runs=20"};
  EXPECT_EQ(run(mf), kExitOk) << log_.str();
  EXPECT_TRUE(fs::exists(root_ / "ucb" / "ucb_bound.csv"));
}

TEST_F(CliRun, Lemma1CheckOnToy) {
  auto mf = manifest("lemma1-check", "l1");
  mf.overrides = {"T=20000"};
  mf.runs = 10;
  EXPECT_EQ(run(mf), kExitOk) << log_.str();
}

TEST_F(CliRun, UnknownCommandAndKey) {
  EXPECT_EQ(run(manifest("dance", "x")), kExitUsage);
  auto mf = manifest("simulate", "y");
  mf.overrides = {"sim.colour=blue"};
  EXPECT_EQ(run(mf), kExitUsage);
  EXPECT_NE(log_.str().find("colour"), std::string::npos);
}

}  // namespace
}  // namespace oti::cli
