// Runs the ohmic-probe executable and checks exit codes and output shape.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ohmic/commands.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run probe(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + OHMIC_PROBE_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(probe("").code, 1);
  EXPECT_EQ(probe("bogus").code, 1);
  EXPECT_EQ(probe("curve --eta abc").code, 1);
  EXPECT_EQ(probe("curve --format xml").code, 1);
  EXPECT_EQ(probe("curve --points 1").code, 1);
  EXPECT_EQ(probe("curve --log --tau-min 0").code, 1);
  EXPECT_EQ(probe("sweep --vary omega").code, 1);
  EXPECT_EQ(probe("figure 9q").code, 1);
  EXPECT_EQ(probe("optimum --eta -1").code, 1);
  EXPECT_EQ(probe("ramsey --shots 2.5").code, 1);
  EXPECT_EQ(probe("--help").code, 0);
}

TEST(Cli, CurveCsv) {
  const auto r = probe("curve --eta 0.1 --s 1 --theta 0 --tau-min 0 --tau-max 2 --points 5");
  ASSERT_EQ(r.code, 0);
  const auto ds = ohmic::cli::parse_csv(r.out);
  EXPECT_EQ(ds.columns, (std::vector<std::string>{"eta", "s", "theta", "tau", "q", "gamma"}));
  ASSERT_EQ(ds.rows.size(), 5u);
  EXPECT_EQ(ds.rows[0].values[4], 0.0);
  EXPECT_EQ(r.out.rfind("# ", 0), 0u);
}

TEST(Cli, ScientificNotationAndJson) {
  const auto r = probe("curve --eta 1e-1 --tau-min 1e-3 --tau-max 1e2 --points 4 --log --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_DOUBLE_EQ(j["rows"][0]["tau"].get<double>(), 1e-3);
}

TEST(Cli, RowErrorsExitTwo) {
  const auto r = probe("curve --s -1 --tau-min 0.1 --tau-max 1 --points 3");
  EXPECT_EQ(r.code, 2);
  const auto ds = ohmic::cli::parse_csv(r.out);
  ASSERT_EQ(ds.rows.size(), 3u);
  EXPECT_FALSE(ds.rows[0].error.empty());
}

TEST(Cli, Optimum) {
  const auto r = probe("optimum --eta 400 --s 1 --theta 0");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["q_opt"].get<double>(), 0.6476, 5e-3);
  EXPECT_TRUE(j["short_time_regime"].get<bool>());
  for (const char* k : {"tau_opt", "gamma_opt"}) EXPECT_TRUE(j.contains(k));

  const auto hot = nlohmann::json::parse(probe("optimum --eta 0.1 --theta 1e4").out);
  EXPECT_NEAR(hot["q_opt"].get<double>(), 0.1619, 2e-3);
}

TEST(Cli, DimensionfulModeReproducesScaled) {
  const auto scaled = nlohmann::json::parse(probe("optimum --eta 0.3 --s 1.5 --theta 0.4").out);
  const auto dim = nlohmann::json::parse(
      probe("optimum --eta 0.3 --s 1.5 --omega-c 2 --temperature 0.8").out);
  EXPECT_NEAR(dim["q_opt"].get<double>(), scaled["q_opt"].get<double>(), 1e-12);
  EXPECT_NEAR(dim["t_opt"].get<double>(), 0.5 * scaled["tau_opt"].get<double>(), 1e-12);

  const auto a = ohmic::cli::parse_csv(
      probe("curve --eta 0.3 --s 1.5 --theta 0.4 --tau-min 0.1 --tau-max 10 --points 4").out);
  const auto b = ohmic::cli::parse_csv(probe(
      "curve --eta 0.3 --s 1.5 --omega-c 2 --temperature 0.8 --tau-min 0.1 --tau-max 10 --points 4")
                                           .out);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].values[4], b.rows[i].values[3]);
  }
}

TEST(Cli, RamseyDeterministicAndShotScaling) {
  const auto a = probe("ramsey --trials 50");
  const auto b = probe("ramsey --trials 50");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  for (const char* k : {"estimates", "mean", "empirical_variance", "mse", "crb", "ratio",
                        "failures", "valid"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  const auto doubled = nlohmann::json::parse(probe("ramsey --trials 50 --shots 2e4").out);
  EXPECT_NEAR(doubled["crb"].get<double>(), 0.5 * j["crb"].get<double>(), 1e-15);
}

TEST(Cli, RamseyInvalidReportExitsTwo) {
  // Nearly full dephasing: most trials give a non-positive coherence estimate.
  EXPECT_EQ(probe("ramsey --eta 50 --tau 30 --shots 100 --trials 20").code, 2);
}

TEST(Cli, OutputFileAndThreadCap) {
  const std::string path = std::string(::testing::TempDir()) + "ohmic_probe_cli.csv";
  ASSERT_EQ(probe("sweep --vary eta --min 0.1 --max 10 --points 4 --log --output " + path).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto file = ohmic::cli::parse_csv(ss.str());
  EXPECT_EQ(file.rows.size(), 4u);

  const std::string sweep = "sweep --vary eta --min 0.1 --max 10 --points 4 --log";
  EXPECT_EQ(probe(sweep, "OHMIC_PROBE_THREADS=1").out, probe(sweep, "OHMIC_PROBE_THREADS=3").out);
}

TEST(Cli, FigureAndEnhancement) {
  const auto fig = probe("figure 6b");
  ASSERT_EQ(fig.code, 0);
  const auto ds = ohmic::cli::parse_csv(fig.out);
  EXPECT_EQ(ds.rows.size(), 28u);
  EXPECT_NE(fig.out.find("# panel: "), std::string::npos);
  EXPECT_EQ(probe("enhancement --s 1 --eta-min 0.01 --eta-max 1 --points 3 --log").code, 0);
  EXPECT_EQ(probe("critical-eta --s-min 0.5 --s-max 2 --points 2").code, 0);
}
