// fdstat command-line tool. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "fdstat/fdstat.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRejected = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(fds_status s) {
  switch (s) {
    case FDS_OK: return kExitOk;
    case FDS_ERR_NULL_ARGUMENT:
    case FDS_ERR_PARAMETER: return kExitUsage;
    default: return kExitData;
  }
}

void check(fds_status s) {
  if (s != FDS_OK) throw Failure{exit_code_for(s), std::string(fds_status_name(s)) + " error: " + fds_last_error()};
}

struct StringDeleter {
  void operator()(char* p) const { fds_string_free(p); }
};
struct BasefnDeleter {
  void operator()(fds_basefn* p) const { fds_basefn_destroy(p); }
};
struct SampleDeleter {
  void operator()(fds_sample* p) const { fds_sample_destroy(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;
using Basefn = std::unique_ptr<fds_basefn, BasefnDeleter>;
using Sample = std::unique_ptr<fds_sample, SampleDeleter>;

std::string take(char* s) {
  OwnedString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

std::vector<double> read_values(const std::string& path) {
  double* values = nullptr;
  std::size_t count = 0;
  check(fds_read_values_file(path.c_str(), &values, &count));
  std::vector<double> out(values, values + count);
  fds_values_free(values);
  return out;
}

// A descriptor is inline JSON or @path to a JSON file.
std::string descriptor_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw Failure{kExitData, "cannot open descriptor file '" + arg.substr(1) + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Basefn make_basefn(const std::string& preset, const std::string& descriptor, std::size_t n) {
  fds_basefn* raw = nullptr;
  if (!descriptor.empty()) {
    check(fds_basefn_from_json(descriptor_text(descriptor).c_str(), &raw));
    Basefn u(raw);
    if (fds_basefn_arity(u.get()) != n) {
      throw Failure{kExitUsage, "descriptor arity " + std::to_string(fds_basefn_arity(u.get())) +
                                    " does not match n = " + std::to_string(n)};
    }
    return u;
  }
  check(fds_basefn_preset(preset.c_str(), n, &raw));
  return Basefn(raw);
}

nlohmann::json describe(const fds_basefn* u) {
  char* s = nullptr;
  check(fds_basefn_to_json(u, &s));
  return nlohmann::json::parse(take(s));
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw Failure{kExitData, "cannot write '" + output_path + "'"};
  out << text << '\n';
}

struct StatsOptions {
  std::string input;
  std::vector<std::string> presets;
  std::string descriptor;
};

int run_stats(const StatsOptions& o, const std::string& output) {
  const auto values = read_values(o.input);
  fds_sample* raw = nullptr;
  check(fds_sample_create(values.data(), values.size(), &raw));
  Sample sample(raw);

  nlohmann::json result = nlohmann::json::object();
  nlohmann::json statistics = nlohmann::json::array();
  auto add = [&](const Basefn& u, const std::string& key) {
    double z = 0.0;
    check(fds_basefn_statistic(u.get(), sample.get(), &z));
    result[key] = z;
    statistics.push_back(describe(u.get()));
  };
  const auto presets = o.presets.empty() && o.descriptor.empty()
                           ? std::vector<std::string>{"range", "gini", "variance"}
                           : o.presets;
  for (const auto& p : presets) add(make_basefn(p, "", values.size()), p);
  if (!o.descriptor.empty()) {
    auto u = make_basefn("", o.descriptor, values.size());
    add(u, fds_basefn_label(u.get()));
  }
  result["config"] = {{"command", "stats"}, {"input", o.input}, {"n", values.size()}, {"statistics", statistics}};
  emit(result.dump(), output);
  std::cerr << "stats: " << values.size() << " values, " << presets.size() + (o.descriptor.empty() ? 0 : 1)
            << " statistic(s)\n";
  return kExitOk;
}

struct VerifyOptions {
  std::string suite;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t corpus = 0;
  std::size_t trials = 0;
};

int run_verify(const VerifyOptions& o, const std::string& output) {
  fds_suite_config c;
  fds_suite_config_default(&c);
  c.n = o.n;
  c.seed = o.seed;
  if (o.corpus != 0) c.corpus = o.corpus;
  if (o.trials != 0) c.trials = o.trials;
  char* json = nullptr;
  int all_passed = 0;
  check(fds_verify_suite(o.suite.c_str(), &c, &json, &all_passed));
  const std::string text = take(json);
  emit(text, output);

  const auto reports = nlohmann::json::parse(text);
  std::size_t passed = 0;
  for (const auto& r : reports) {
    const bool ok = r.at("passed").get<bool>();
    passed += ok ? 1 : 0;
    std::cerr << (ok ? "PASS " : "FAIL ") << r.at("check_name").get<std::string>() << "  measured=" << r.at("measured")
              << " tolerance=" << r.at("tolerance") << '\n';
  }
  std::cerr << "verify " << o.suite << ": " << passed << "/" << reports.size() << " passed (seed " << o.seed << ")\n";
  return all_passed ? kExitOk : kExitData;
}

struct TStarOptions {
  std::string preset = "gini";
  std::string descriptor;
  std::size_t n = 5;
  std::size_t reps = 100000;
  std::vector<double> levels{0.025, 0.05, 0.5, 0.95, 0.975};
  std::uint64_t seed = 0;
};

int run_tstar(const TStarOptions& o, const std::string& output) {
  auto u = make_basefn(o.preset, o.descriptor, o.n);
  char* json = nullptr;
  check(fds_tstar_table(u.get(), o.reps, o.levels.data(), o.levels.size(), o.seed, &json));
  emit(take(json), output);
  std::cerr << "simulate tstar: " << fds_basefn_label(u.get()) << ", n=" << o.n << ", reps=" << o.reps
            << ", seed=" << o.seed << '\n';
  return kExitOk;
}

struct NormalityOptions {
  std::string input;
  std::string distribution;
  std::size_t blocks = 200;
  std::string preset = "gini";
  std::string descriptor;
  fds_test_config config{};
};

int run_normality(const NormalityOptions& o, const std::string& output) {
  if (o.input.empty() == o.distribution.empty()) {
    throw Failure{kExitUsage, "give exactly one of --input or --distribution"};
  }
  auto u = make_basefn(o.preset, o.descriptor, o.config.n_block);
  char* json = nullptr;
  int reject = 0;
  if (!o.input.empty()) {
    const auto values = read_values(o.input);
    check(fds_independence_test_data(values.data(), values.size(), u.get(), &o.config, &json, &reject));
  } else {
    check(fds_independence_test_simulated(descriptor_text(o.distribution).c_str(), o.blocks, u.get(), &o.config, &json,
                                          &reject));
  }
  const std::string text = take(json);
  emit(text, output);
  const auto report = nlohmann::json::parse(text);
  std::cerr << "test-normality: dcov=" << report.at("dcov") << " p=" << report.at("p_value")
            << (reject ? " -> reject normality" : " -> no rejection") << " (seed " << o.config.seed << ")\n";
  return reject ? kExitRejected : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible definite statistics: computation, verification and normality testing"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  unsigned workers = 0;
  app.add_option("-o,--output", output, "Write the JSON report to this file instead of stdout");
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency); results do not depend on it");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Statistic values for a sample");
  stats_cmd->add_option("-i,--input", stats.input, "File with one value per line")->required();
  stats_cmd->add_option("-p,--preset", stats.presets, "range | gini | variance | sd | standard_error (repeatable)");
  stats_cmd->add_option("-s,--statistic", stats.descriptor, "Base function descriptor: JSON or @file");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", verify.suite, "inequalities | transform | density | anosov | all")
      ->required()
      ->check(CLI::IsMember({"inequalities", "transform", "density", "anosov", "all"}));
  verify_cmd->add_option("-n,--n", verify.n, "Restrict to one sample size");
  verify_cmd->add_option("--seed", verify.seed, "Random seed")->capture_default_str();
  verify_cmd->add_option("--corpus", verify.corpus, "Random samples per n for corpus checks");
  verify_cmd->add_option("--trials", verify.trials, "Points per pointwise check");

  TStarOptions tstar;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo tables");
  simulate_cmd->require_subcommand(1);
  auto* tstar_cmd = simulate_cmd->add_subcommand("tstar", "Quantiles of the generalized studentized statistic");
  tstar_cmd->add_option("-p,--preset", tstar.preset, "Degree-1 preset")->capture_default_str();
  tstar_cmd->add_option("-s,--statistic", tstar.descriptor, "Base function descriptor: JSON or @file");
  tstar_cmd->add_option("-n,--n", tstar.n, "Sample size")->capture_default_str();
  tstar_cmd->add_option("--reps", tstar.reps, "Replications (>= 10000)")->capture_default_str();
  tstar_cmd->add_option("--levels", tstar.levels, "Probability levels")->delimiter(',')->capture_default_str();
  tstar_cmd->add_option("--seed", tstar.seed, "Random seed")->capture_default_str();

  NormalityOptions normality;
  fds_test_config_default(&normality.config);
  auto* test_cmd = app.add_subcommand("test-normality", "Independence-based normality test");
  test_cmd->add_option("-i,--input", normality.input, "File with one value per line");
  test_cmd->add_option("--distribution", normality.distribution,
                       "Simulate instead: distribution JSON or @file, e.g. {\"family\":\"Normal\"}");
  test_cmd->add_option("--blocks", normality.blocks, "Blocks to simulate")->capture_default_str();
  test_cmd->add_option("-p,--preset", normality.preset, "Statistic preset")->capture_default_str();
  test_cmd->add_option("-s,--statistic", normality.descriptor, "Base function descriptor: JSON or @file");
  test_cmd->add_option("--block", normality.config.n_block, "Block size")->capture_default_str();
  test_cmd->add_option("--permutations", normality.config.permutations, "Permutations")->capture_default_str();
  test_cmd->add_option("--alpha", normality.config.alpha, "Significance level")->capture_default_str();
  test_cmd->add_option("--seed", normality.config.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  fds_set_workers(workers);
  try {
    if (*stats_cmd) return run_stats(stats, output);
    if (*verify_cmd) return run_verify(verify, output);
    if (*tstar_cmd) return run_tstar(tstar, output);
    if (*test_cmd) return run_normality(normality, output);
  } catch (const Failure& f) {
    std::cerr << "fdstat: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "fdstat: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
