#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LPROUND_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(LPROUND_DATA_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kHeader = "instance,threads,steps,wall_ms,eps,lp_objective,rounded_objective,seed";

}  // namespace

TEST(Cli, VertexCoverOnTriangle) {
  const auto r = run("solve vc --graph " + data("k3.txt") + " --seed 7");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  for (const char* key : {"lp_objective", "rounded_objective", "eps", "delta_ref", "steps", "threads", "wall_ms",
                          "seed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["threads"], 1);
  EXPECT_LE(j["rounded_objective"].get<double>(), 2.0 * j["lp_objective"].get<double>() * (1.0 + 0.1));
  EXPECT_NEAR(j["lp_objective"].get<double>(), 1.5, 0.15);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_EQ(j["conditioning"]["source"], "vc-closed-form");
}

TEST(Cli, EdgeLpMeetsEps) {
  const auto r = run("solve lp --lp " + data("tiny.lp") + " --eps 0.1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_LE(j["eps"].get<double>(), 0.1);
  EXPECT_TRUE(j["rounded_objective"].is_null());
  EXPECT_NEAR(j["lp_objective"].get<double>(), 1.0, 0.1);
}

TEST(Cli, MultiwayCutOnPath) {
  const auto r = run("solve mwc --graph " + data("path.txt") + " --terminals " + data("t.txt") + " --k 2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_GE(j["rounded_objective"].get<double>(), j["lp_objective"].get<double>() - 1e-9);
  EXPECT_DOUBLE_EQ(j["rounded_objective"].get<double>(), 1.0);
  const auto a = j["assignment"].get<std::vector<std::size_t>>();
  ASSERT_EQ(a.size(), 3u);
  EXPECT_NE(a[0], a[2]);
}

TEST(Cli, MisAndSetCover) {
  auto r = run("solve mis --graph " + data("k3.txt"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_LE(j["selected"].size(), 1u);
  r = run("solve setcover --sets " + data("sets.txt") + " --randomized --reps 5");
  ASSERT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_GE(j["rounded_objective"].get<double>(), 2.0);
}

TEST(Cli, CsvOutput) {
  const auto r = run("solve vc --graph " + data("k3.txt") + " --out csv");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], kHeader);
  EXPECT_EQ(l[1].rfind("vc,1,", 0), 0u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("solve vc").code, 1);
  EXPECT_EQ(run("solve tsp --graph " + data("k3.txt")).code, 1);
  EXPECT_EQ(run("solve vc --graph /nonexistent/graph.txt").code, 1);
  EXPECT_EQ(run("solve mwc --graph " + data("path.txt") + " --terminals " + data("t.txt") + " --k 3").code, 1);
  EXPECT_EQ(run("solve vc --graph " + data("k3.txt") + " --eps -1").code, 1);
  EXPECT_EQ(run("solve lp --lp " + data("k3.txt")).code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, InfeasibleLpExitsTwo) {
  const std::string path = testing::TempDir() + "infeasible.lp";
  FILE* f = std::fopen(path.c_str(), "w");
  ASSERT_NE(f, nullptr);
  std::fputs("1 2 2 min\n3\n1 1\n0 0 1\n0 1 1\n0 1\n0 1\n", f);
  std::fclose(f);
  EXPECT_EQ(run("solve lp --lp " + path).code, 2);
}

TEST(Cli, TimeLimitGivesPartialJson) {
  const std::string path = testing::TempDir() + "chain.txt";
  FILE* f = std::fopen(path.c_str(), "w");
  ASSERT_NE(f, nullptr);
  for (int v = 0; v < 3000; ++v) std::fprintf(f, "%d %d\n%d %d\n", v, v + 1, v, (v * 7 + 3) % 3000);
  std::fclose(f);
  const auto r = run("solve vc --graph " + path + " --time-limit 0.001 --eps 1e-9");
  EXPECT_EQ(r.code, 3);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["timed_out"].get<bool>());
  EXPECT_TRUE(j["rounded_objective"].is_null());
}

TEST(Cli, BenchDeterministicAndHeaderOnly) {
  auto r = run("bench");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), std::vector<std::string>{kHeader});

  r = run("bench " + data("k3.txt") + " --threads 1 --reps 2 --seed 3");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  const auto fields = [](const std::string& row) {
    std::vector<std::string> out;
    std::istringstream in(row);
    for (std::string c; std::getline(in, c, ',');) out.push_back(c);
    return out;
  };
  const auto a = fields(l[1]), b = fields(l[2]);
  ASSERT_EQ(a.size(), 8u);
  EXPECT_EQ(a[0], "k3.txt");
  EXPECT_EQ(a[2], b[2]);  // steps
  EXPECT_EQ(a[4], b[4]);  // eps
  EXPECT_EQ(a[5], b[5]);  // lp objective
  EXPECT_EQ(a[6], b[6]);  // rounded objective
  EXPECT_EQ(a[7], "3");
}

TEST(Cli, BenchThreadSweep) {
  const auto r = run("bench " + data("k3.txt") + " " + data("path.txt") + " --threads 1,2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 5u);
}
