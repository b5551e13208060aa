#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

// stdout is captured; stderr is discarded.
Run run(const std::string& args) {
  const std::string command = std::string(FDSTAT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, StatsGiniPreset) {
  const auto path = write_file("cli_124.csv", "1\n2\n4\n");
  const auto r = run("stats --preset gini -i " + path);
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["gini"].get<double>(), 2.0);
  EXPECT_EQ(j["config"]["statistics"][0]["family"], "PairwisePower");
}

TEST(Cli, StatsDefaultsAndDescriptor) {
  const auto path = write_file("cli_124b.csv", "value\n1\n2\n4\n");
  auto r = run("stats -i " + path);
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["range"].get<double>(), 3.0);
  EXPECT_NEAR(j["variance"].get<double>(), 7.0 / 3.0, 1e-15);
  const auto descriptor =
      write_file("cli_linear.json", R"({"family":"Linear","n":3,"degree":1,"coefficients":[-1,0,1],"label":"span"})");
  r = run("stats -i " + path + " -s @" + descriptor);
  ASSERT_EQ(r.exit_code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["span"].get<double>(), 3.0);
}

TEST(Cli, VerifyDensityThree) {
  const auto r = run("verify --suite density --n 3");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_LT(j[0]["measured"].get<double>(), 1e-6);
  EXPECT_TRUE(j[0]["passed"].get<bool>());
}

TEST(Cli, VerifyIsReproducible) {
  const auto a = run("verify --suite anosov --seed 7");
  const auto b = run("verify --suite anosov --seed 7");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConstantColumnIsADataError) {
  std::string text;
  for (int i = 0; i < 40; ++i) text += "3.5\n";
  const auto path = write_file("cli_constant.csv", text);
  EXPECT_EQ(run("test-normality -i " + path).exit_code, 2);
}

TEST(Cli, NormalityOnSimulatedData) {
  const auto normal = run(R"(test-normality --distribution '{"family":"Normal"}' --blocks 200 --permutations 199 --seed 1)");
  ASSERT_TRUE(normal.exit_code == 0 || normal.exit_code == 3);
  const auto j = nlohmann::json::parse(normal.out);
  EXPECT_EQ(j["reject"].get<bool>(), normal.exit_code == 3);
  EXPECT_EQ(j["seed"], 1);
  const auto skewed = run(
      R"(test-normality --distribution '{"family":"Exponential"}' -p range --blocks 400 --permutations 199 --seed 2)");
  EXPECT_EQ(skewed.exit_code, 3);
}

TEST(Cli, SimulateTstarTable) {
  const auto r = run("simulate tstar -p gini -n 5 --reps 20000 --levels 0.05,0.95 --seed 4");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"], 5);
  EXPECT_EQ(j["seed"], 4);
  ASSERT_EQ(j["quantiles"].size(), 2u);
  EXPECT_GT(j["quantiles"][1]["quantile"].get<double>(), 0.0);
}

TEST(Cli, OutputFile) {
  const std::string out = testing::TempDir() + "cli_report.json";
  std::remove(out.c_str());
  const auto r = run("verify --suite density -n 3 -o " + out);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  EXPECT_EQ(nlohmann::json::parse(in).size(), 1u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
  EXPECT_EQ(run("verify --suite nope").exit_code, 1);
  EXPECT_EQ(run("simulate tstar --reps 10").exit_code, 1);
  EXPECT_EQ(run("stats").exit_code, 1);
}

TEST(Cli, DataErrors) {
  EXPECT_EQ(run("stats -i /nonexistent/values.csv").exit_code, 2);
  const auto bad = write_file("cli_bad.csv", "1\nabc\n");
  EXPECT_EQ(run("stats -i " + bad).exit_code, 2);
  const auto pair = write_file("cli_pair.csv", "1\n2\n");
  EXPECT_EQ(run("stats -p gini -i " + pair).exit_code, 0);
}
