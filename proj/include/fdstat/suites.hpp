#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdstat/base_function.hpp"
#include "fdstat/report.hpp"

namespace fdstat {

struct SuiteConfig {
  std::optional<std::size_t> n;  // restrict n-dependent checks to one sample size
  std::uint64_t seed = 0;
  std::size_t corpus = 10000;    // random samples per n for corpus checks
  std::size_t trials = 1000;     // points per pointwise check
};

/// "inequalities", "transform", "density", "anosov" or "all".
const std::vector<std::string>& suite_names();

/// Runs a named suite. Throws ErrorKind::Parameter for an unknown name or an
/// n the suite does not support.
std::vector<VerificationReport> run_suite(const std::string& name, const SuiteConfig& config = {});

// Building blocks of the inequality suite, exposed for the acceptance harness.

/// Lower bound 1/(n-1) on the order correlation of random co-sorted pairs of size n (continuous
/// and tied draws). Near-equality witnesses must match a known equality case.
VerificationReport order_correlation_corpus_check(std::size_t n, std::size_t samples, std::uint64_t seed);

/// Range and Gini bounds, strict range lower bound and G < R for n >= 3, on
/// random samples of size n.
VerificationReport range_gini_corpus_check(std::size_t n, std::size_t samples, std::uint64_t seed);

/// The symmetric witness (-1, 0, ..., 0, 1) attains the range upper bound.
VerificationReport range_upper_witness_check(std::size_t n);

/// S_2^2 = R_2^2 / 2 and G_2 = R_2 on random pairs.
VerificationReport two_point_identities_check(std::size_t pairs, std::uint64_t seed, double tolerance = 1e-15);

/// Catalog base functions of arity n: presets plus one member of every family.
std::vector<BaseFunction> catalog(std::size_t n);

}  // namespace fdstat
