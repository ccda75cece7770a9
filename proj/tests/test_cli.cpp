#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gcrp/gamma_audit.hpp"
#include "gcrp/json_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = GCRP_CLI_PATH;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gcrp_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kCli + " " + args + " >" + (log / "stdout.txt").string() + " 2>" +
                          (log / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, MissingAlphaIsUsageError) {
  const auto d = scratch("missing");
  EXPECT_EQ(run("simulate --theta 0.5 --n 10 --out " + d.string(), d), 2);
}

TEST(Cli, InvalidRegimeShowsTable) {
  const auto d = scratch("regime");
  EXPECT_EQ(run("simulate --alpha 1.0 --theta 0.5 --n 10 --out " + d.string(), d), 2);
  const auto err = slurp(d / "stderr.txt");
  EXPECT_NE(err.find("invalid regime"), std::string::npos);
  EXPECT_NE(err.find("Polynomial"), std::string::npos);
  EXPECT_NE(err.find("BoundedParts"), std::string::npos);
}

TEST(Cli, SimulateDefaultHistogramTruncation) {
  // ceil(10^4^{0.5/5}) = ceil(2.512) = 3.
  const auto d = scratch("sim_kmax");
  ASSERT_EQ(run("simulate --alpha 0.5 --theta 0.5 --n 10000 --seed 3 --out " + d.string(), d), 0);
  const auto manifest = gcrp::Json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(manifest["config"]["kmax"], 3);
  EXPECT_NE(slurp(d / "histogram.csv").find("\n>3,"), std::string::npos);
}

TEST(Cli, SimulateIsByteReproducible) {
  const auto a = scratch("sim_a");
  const auto b = scratch("sim_b");
  const std::string args = "simulate --alpha 0.5 --theta 0.5 --n 1000 --seed 7 --replicas 5 --martingales";
  ASSERT_EQ(run(args + " --out " + a.string(), a), 0);
  ASSERT_EQ(run(args + " --out " + b.string(), b), 0);
  for (const char* f : {"trajectories.jsonl", "histogram.csv", "manifest.json", "martingales.jsonl"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto manifest = gcrp::Json::parse(slurp(a / "manifest.json"));
  const std::string digest = manifest["config_digest"];
  EXPECT_EQ(manifest["outputs"].size(), 4u);
  EXPECT_NE(slurp(a / "histogram.csv").find("# manifest_digest=" + digest), std::string::npos);
  std::ifstream lines(a / "trajectories.jsonl");
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(gcrp::Json::parse(line)["manifest_digest"], digest);
    ++count;
  }
  EXPECT_EQ(count, 5);
  // Martingale audits on the written paths all pass.
  std::ifstream mart(a / "martingales.jsonl");
  while (std::getline(mart, line)) {
    for (const auto& audit : gcrp::Json::parse(line)["audits"]) EXPECT_EQ(audit["verdict"], "PASS") << audit["name"];
  }
}

TEST(Cli, SimulateIndependentOfThreadCount) {
  const auto a = scratch("thr_a");
  const auto b = scratch("thr_b");
  const std::string args = " simulate --alpha 0.25 --theta 1 --n 2000 --seed 3 --replicas 16";
  ASSERT_EQ(run(args + " --out " + a.string(), a), 0);
  const std::string cmd = "GCRP_THREADS=1 " + kCli + args + " --out " + b.string() + " >/dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(a / "trajectories.jsonl"), slurp(b / "trajectories.jsonl"));
}

TEST(Cli, ExplicitCheckpointsAndBadList) {
  const auto d = scratch("cps");
  EXPECT_EQ(run("simulate --alpha -0.5 --theta 1.5 --n 500 --checkpoints 10,100 --out " + d.string(), d), 0);
  const auto line = gcrp::Json::parse(slurp(d / "trajectories.jsonl"));
  EXPECT_EQ(line["records"].size(), 3u);
  EXPECT_EQ(run("simulate --alpha 0.5 --theta 0.5 --n 500 --checkpoints 10,x --out " + d.string(), d), 2);
}

TEST(Cli, ThmVDeltaPrecondition) {
  const auto d = scratch("thmv");
  EXPECT_EQ(run("verify thm-v --alpha 0.5 --theta 0.5 --delta 0.1 --out " + d.string(), d), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("delta < e^{-K}"), std::string::npos);
}

TEST(Cli, VerifyRejectsNonPolynomial) {
  const auto d = scratch("verify_regime");
  EXPECT_EQ(run("verify vm --alpha 0 --theta 2 --out " + d.string(), d), 2);
}

TEST(Cli, VmPassesAndFaultInjectionFails) {
  const auto ok = scratch("vm_ok");
  EXPECT_EQ(run("verify vm --alpha 0.5 --theta 0.5 --n 20000 --replicas 300 --seed 1 --out " + ok.string(), ok), 0);
  const auto report = gcrp::Json::parse(slurp(ok / "report.json"));
  EXPECT_EQ(report["verdict"], "PASS");
  EXPECT_FALSE(report["reports"][0]["rows"].empty());
  const auto bad = scratch("vm_bad");
  EXPECT_EQ(run("verify vm --alpha 0.5 --theta 0.5 --n 20000 --replicas 300 --seed 1 --corrupt-phi 0.1 --out " +
                    bad.string(),
                bad),
            1);
  EXPECT_EQ(gcrp::Json::parse(slurp(bad / "report.json"))["verdict"], "FAIL");
}

TEST(Cli, ConstantsListsProvenance) {
  const auto d = scratch("constants");
  ASSERT_EQ(run("constants --alpha 0.5 --theta 0.5 --out " + d.string(), d), 0);
  const auto j = gcrp::Json::parse(slurp(d / "constants.json"));
  for (const char* key : {"K", "R", "c1", "c2", "c3", "cV", "c_star", "cM", "h", "c_main", "theta_inf"}) {
    EXPECT_TRUE(j["constants"][key].contains("provenance")) << key;
  }
  EXPECT_EQ(j["coefficients"].size(), 20u);
}

TEST(Cli, OracleMatchesGolden) {
  const auto d = scratch("oracle");
  ASSERT_EQ(run("oracle --alpha 0.5 --theta 0.5 --n 4 --out " + d.string(), d), 0);
  EXPECT_EQ(slurp(d / "oracle.json"), slurp(fs::path(GCRP_GOLDEN_DIR) / "oracle_n4" / "oracle.json"));
  EXPECT_EQ(run("oracle --alpha 0.5 --theta 0.5 --n 13 --out " + d.string(), d), 2);
}

TEST(Cli, GammaAuditExitCodeFollowsVerdict) {
  const auto d = scratch("audit");
  const int code = run("gamma-audit --out " + d.string(), d);
  const bool passed = gcrp::run_all_audits().passed();
  EXPECT_EQ(code, passed ? 0 : 1);
  const auto j = gcrp::Json::parse(slurp(d / "audit.json"));
  EXPECT_EQ(j["verdict"], passed ? "PASS" : "FAIL");
  EXPECT_TRUE(j["missing_lemmas"].empty());
  EXPECT_TRUE(fs::exists(d / "audit.csv"));
}
