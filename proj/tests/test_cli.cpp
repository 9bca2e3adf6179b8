#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "graphrank/cli.hpp"

namespace cli = graphrank::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  const char* dir = std::getenv("GRAPHRANK_GOLDEN_DIR");
  std::ifstream in(std::filesystem::path(dir ? dir : "tests/golden") / name);
  EXPECT_TRUE(in.good()) << name;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("graphrank_cli_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Help, MatchesGolden) {
  const auto top = run({"--help"});
  EXPECT_EQ(top.code, cli::kExitOk);
  EXPECT_EQ(top.out, golden("help.txt"));
  for (const std::string sub : {"rank", "certify", "trace", "sweep", "gofy", "regular", "lo"}) {
    const auto r = run({sub, "--help"});
    EXPECT_EQ(r.code, cli::kExitOk) << sub;
    EXPECT_EQ(r.out, golden("help_" + sub + ".txt")) << sub;
  }
}

TEST(Rank, PathOnThreeVertices) {
  const auto file = write_temp("p3.txt", "3\n1 2\n2 3\n");
  const auto r = run({"rank", "--edges", file});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["command"], "rank");
  EXPECT_EQ(j["result"]["rank"], 2);
  EXPECT_EQ(j["result"]["status"], "certified-deficient");
  const auto& w = j["result"]["witnesses"][0];
  EXPECT_EQ(w["kind"], "cherry");
  EXPECT_EQ(w["center"], 2);
  EXPECT_EQ(w["vertices"], nlohmann::json::array({1, 3}));
}

TEST(Rank, TextAndCsvStartWithConfig) {
  for (const std::string fmt : {"text", "csv"}) {
    const auto r = run({"rank", "--gnp", "20,0.5", "--seed", "1", "--format", fmt});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("# config: ", 0), 0u) << fmt;
  }
}

TEST(Rank, Deterministic) {
  const std::vector<std::string> args{"rank", "--gnp", "100,0.5", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, cli::kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run({"rank", "--gnp", "100,0.5", "--seed", "8"}).out);
}

TEST(ExitCodes, UsageAndFailure) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rank", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rank"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rank", "--gnp", "10,0.5", "--regular", "10,3"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rank", "--gnp", "10,1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--n", "10", "--p", "0.5", "--exposure", "--seed", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--n", "10", "--p", "0.5", "--c", "1", "--seed", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rank", "--regular", "5,3"}).code, cli::kExitUsage);
  const auto missing = run({"rank", "--edges", "/nonexistent/graph.txt"});
  EXPECT_EQ(missing.code, cli::kExitFailure);
  EXPECT_NE(missing.err.find("io error"), std::string::npos);
  const auto bad = write_temp("bad.txt", "3\n1 2\n2 9\n");
  const auto parse = run({"rank", "--edges", bad});
  EXPECT_EQ(parse.code, cli::kExitFailure);
  EXPECT_NE(parse.err.find("line 3"), std::string::npos);
}

TEST(Seeds, RequiredForExperiments) {
  const auto r = run({"sweep", "--n", "10", "--c", "1"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--seed is required"), std::string::npos);
}

TEST(Seeds, EnvironmentVariable) {
  ::setenv("GRAPHRANK_SEED", "3", 1);
  const auto env = run({"gofy", "--n", "20", "--y", "1", "--samples", "2", "--format", "text"});
  ::unsetenv("GRAPHRANK_SEED");
  const auto flag = run({"gofy", "--n", "20", "--y", "1", "--samples", "2", "--format", "text",
                         "--seed", "3"});
  ASSERT_EQ(env.code, cli::kExitOk) << env.err;
  EXPECT_EQ(env.out, flag.out);
}

TEST(Sweep, JsonlIndependentOfWorkers) {
  const std::vector<std::string> base{"sweep", "--n", "40", "--c", "0.5,2", "--samples", "6",
                                      "--seed", "5"};
  auto one = base;
  one.insert(one.end(), {"--workers", "1"});
  auto four = base;
  four.insert(four.end(), {"--workers", "4"});
  const auto a = run(one);
  const auto b = run(four);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  std::istringstream la(a.out), lb(b.out);
  std::string x, y;
  while (std::getline(la, x) && std::getline(lb, y)) {
    auto jx = nlohmann::json::parse(x);
    auto jy = nlohmann::json::parse(y);
    jx.erase("timing");
    jy.erase("timing");
    EXPECT_EQ(jx, jy);
  }
}

TEST(Sweep, PlotFiles) {
  const auto prefix = (std::filesystem::temp_directory_path() / "graphrank_cli_plot").string();
  const auto r = run({"sweep", "--n", "30", "--c", "1", "--samples", "3", "--seed", "2", "--plot",
                      prefix, "--format", "text"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(prefix + ".csv"));
  EXPECT_TRUE(std::filesystem::exists(prefix + ".gp"));
}

TEST(Lo, CsvByDefault) {
  const auto r = run({"lo", "--n", "64", "--p", "0.5", "--seed", "1", "--samples", "1000"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("n,p,np,ones_atom"), std::string::npos);
}

TEST(Certify, StructureReport) {
  const auto r = run({"certify", "--gnp", "60,0.3", "--seed", "4", "--p", "0.3", "--restarts", "50"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["result"].contains("structure"));
}
