#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdstat/base_function.hpp"
#include "fdstat/distributions.hpp"
#include "fdstat/random.hpp"

namespace fdstat {

/// Block mean and feasible definite statistic of one block.
struct MeanStatPair {
  double mean = 0.0;
  double z = 0.0;
};

/// Draws n_blocks independent blocks of size n_block (block b from stream b)
/// and returns (mean, Z_n) per block. Constant blocks are re-drawn.
std::vector<MeanStatPair> dependence_pairs(const DistributionSpec& spec, const BaseFunction& u, std::size_t n_block,
                                           std::size_t n_blocks, const StreamFactory& streams);

/// Splits data into floor(N / n_block) disjoint consecutive blocks (input
/// order) and returns (mean, Z_n) per block. Throws ErrorKind::Size when
/// fewer than 2 blocks fit and ErrorKind::Degeneracy for a constant block.
std::vector<MeanStatPair> block_pairs(std::span<const double> data, const BaseFunction& u, std::size_t n_block);

/// Squared sample distance covariance V_n^2: the mean of the elementwise
/// product of the double-centred distance matrices of the two coordinates.
double distance_covariance(std::span<const MeanStatPair> pairs);

struct TestConfig {
  std::size_t n_block = 5;
  std::size_t permutations = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct TestReport {
  std::string statistic_name;
  std::size_t n_block = 0;
  std::size_t n_blocks = 0;
  double dcov = 0.0;
  double p_value = 1.0;
  std::size_t permutations = 0;
  bool reject = false;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();  // echoed inputs
};

/// Permutation test of independence between block means and Z_n, the
/// pairs standardized per coordinate first. p = (1 + #{perm >= obs}) / (1 + P).
TestReport independence_test(std::span<const double> data, const BaseFunction& u, const TestConfig& config);

/// Same, on n_blocks * n_block simulated draws from `spec` (data stream
/// derived from config.seed).
TestReport independence_test(const DistributionSpec& spec, std::size_t n_blocks, const BaseFunction& u,
                             const TestConfig& config);

/// Lower-level entry: the permutation test on given pairs.
TestReport permutation_test(std::span<const MeanStatPair> pairs, const TestConfig& config);

struct TStarTable {
  std::string statistic_name;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::map<double, double> quantiles;      // symmetrized
  std::map<double, double> raw_quantiles;  // as sampled
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();

  double quantile(double level) const;
};

/// Sampling distribution of T* = mean / Z_n for standard-normal samples of
/// size n. U must have degree 1; reps >= 10^4; levels in (0, 1).
TStarTable tstar_table(const BaseFunction& u, std::size_t n, std::size_t reps, std::span<const double> levels,
                       std::uint64_t seed);

/// Fraction of `reps` fresh standard-normal samples whose interval
/// mean +- q Z_n covers 0.
double interval_coverage(const BaseFunction& u, std::size_t n, double q, std::size_t reps, std::uint64_t seed);

nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const TStarTable& t);

}  // namespace fdstat
