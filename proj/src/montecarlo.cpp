#include "fdstat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fdstat/error.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/parallel.hpp"
#include "fdstat/summation.hpp"

namespace fdstat {

namespace {

// Stream domains, so that data draws and permutations never share a stream.
constexpr std::uint64_t kDataDomain = 0xda7a;
constexpr std::uint64_t kPermutationDomain = 0x9e53;
constexpr std::uint64_t kTStarDomain = 0x75a5;
constexpr std::uint64_t kCoverageDomain = 0xc0fe;

constexpr std::size_t kRepsPerStream = 4096;
constexpr std::size_t kPermutationsPerTask = 64;

void validate_test_config(const TestConfig& c) {
  if (c.n_block < 3) fail(ErrorKind::Parameter, "block size must be >= 3");
  if (c.permutations < 99) fail(ErrorKind::Parameter, "at least 99 permutations are required");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail(ErrorKind::Parameter, "alpha must lie in (0, 1)");
}

nlohmann::json describe(const BaseFunction& u) {
  if (u.family() == Family::Custom) return {{"family", "Custom"}, {"label", u.label()}, {"n", u.arity()}};
  return to_json(u);
}

MeanStatPair block_pair(const OrderedSample& s, const BaseFunction& u) { return {s.mean(), statistic(u, s)}; }

std::vector<double> double_centered_distances(const std::vector<double>& v) {
  const std::size_t m = v.size();
  std::vector<double> d(m * m);
  std::vector<double> row_mean(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      d[i * m + j] = std::abs(v[i] - v[j]);
      row_mean[i] += d[i * m + j];
    }
  }
  double grand = 0.0;
  for (auto& r : row_mean) {
    grand += r;
    r /= static_cast<double>(m);
  }
  grand /= static_cast<double>(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) d[i * m + j] += grand - row_mean[i] - row_mean[j];
  }
  return d;
}

double product_mean(const std::vector<double>& a, const std::vector<double>& b, std::size_t m) {
  double s = 0.0;
  for (std::size_t k = 0; k < m * m; ++k) s += a[k] * b[k];
  return std::max(0.0, s / static_cast<double>(m * m));
}

// Centre and scale to unit sample SD. A coordinate whose spread is at
// rounding level relative to its magnitude is treated as constant (zeroed).
std::vector<double> standardized(std::vector<double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = compensated_sum(v) / n;
  double magnitude = 0.0;
  for (double x : v) magnitude = std::max(magnitude, std::abs(x));
  CompensatedSum ss;
  for (auto& x : v) {
    x -= mean;
    ss.add(x * x);
  }
  const double sd = std::sqrt(ss.value() / (n - 1.0));
  if (sd > 1e-12 * magnitude) {
    for (auto& x : v) x /= sd;
  } else {
    std::fill(v.begin(), v.end(), 0.0);
  }
  return v;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::vector<MeanStatPair> dependence_pairs(const DistributionSpec& spec, const BaseFunction& u, std::size_t n_block,
                                           std::size_t n_blocks, const StreamFactory& streams) {
  spec.validate();
  if (n_block < 3) fail(ErrorKind::Parameter, "block size must be >= 3");
  if (n_blocks < 2) fail(ErrorKind::Parameter, "at least 2 blocks are required");
  if (u.arity() != n_block) fail(ErrorKind::Size, "base function arity does not match the block size");
  return parallel_map(n_blocks, [&](std::size_t b) {
    auto eng = streams.stream(b);
    for (;;) {
      const auto s = OrderedSample::from_unsorted(sample(spec, n_block, eng));
      if (s.sd() > 0.0) return block_pair(s, u);
    }
  });
}

std::vector<MeanStatPair> block_pairs(std::span<const double> data, const BaseFunction& u, std::size_t n_block) {
  if (n_block < 3) fail(ErrorKind::Parameter, "block size must be >= 3");
  if (u.arity() != n_block) fail(ErrorKind::Size, "base function arity does not match the block size");
  const std::size_t blocks = data.size() / n_block;
  if (blocks < 2) {
    fail(ErrorKind::Size, "need at least 2 blocks of " + std::to_string(n_block) + " values, got " +
                              std::to_string(data.size()) + " values");
  }
  std::vector<MeanStatPair> pairs;
  pairs.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto s = OrderedSample::from_unsorted(data.subspan(b * n_block, n_block));
    if (!(s.sd() > 0.0)) fail(ErrorKind::Degeneracy, "block " + std::to_string(b) + " is constant");
    pairs.push_back(block_pair(s, u));
  }
  return pairs;
}

double distance_covariance(std::span<const MeanStatPair> pairs) {
  if (pairs.size() < 2) fail(ErrorKind::Size, "distance covariance needs at least 2 pairs");
  std::vector<double> x, y;
  x.reserve(pairs.size());
  y.reserve(pairs.size());
  for (const auto& p : pairs) {
    x.push_back(p.mean);
    y.push_back(p.z);
  }
  return product_mean(double_centered_distances(x), double_centered_distances(y), pairs.size());
}

TestReport permutation_test(std::span<const MeanStatPair> pairs, const TestConfig& config) {
  validate_test_config(config);
  if (pairs.size() < 2) fail(ErrorKind::Size, "the permutation test needs at least 2 pairs");
  const std::size_t m = pairs.size();
  std::vector<double> x, y;
  for (const auto& p : pairs) {
    x.push_back(p.mean);
    y.push_back(p.z);
  }
  const auto a = double_centered_distances(standardized(std::move(x)));
  const auto b = double_centered_distances(standardized(std::move(y)));
  const double observed = product_mean(a, b, m);
  // Permuted values equal to the observed one up to rounding count as ties;
  // rounding is relative to the Cauchy-Schwarz bound, not to the value.
  const double bound = std::sqrt(product_mean(a, a, m) * product_mean(b, b, m));
  const double threshold = observed - 1e-12 * bound;

  const StreamFactory streams(config.seed, kPermutationDomain);
  const std::size_t tasks = (config.permutations + kPermutationsPerTask - 1) / kPermutationsPerTask;
  const auto counts = parallel_map(tasks, [&](std::size_t task) {
    std::size_t hits = 0;
    std::vector<std::size_t> perm(m);
    const std::size_t end = std::min(config.permutations, (task + 1) * kPermutationsPerTask);
    for (std::size_t k = task * kPermutationsPerTask; k < end; ++k) {
      auto eng = streams.stream(k);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = m - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(uniform01(eng) * static_cast<double>(i + 1));
        std::swap(perm[i], perm[std::min(j, i)]);
      }
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double* arow = &a[i * m];
        const double* brow = &b[perm[i] * m];
        for (std::size_t j = 0; j < m; ++j) s += arow[j] * brow[perm[j]];
      }
      if (std::max(0.0, s / static_cast<double>(m * m)) >= threshold) ++hits;
    }
    return hits;
  });
  const std::size_t exceed = std::accumulate(counts.begin(), counts.end(), std::size_t{0});

  TestReport r;
  r.n_block = config.n_block;
  r.n_blocks = m;
  r.dcov = observed;
  r.permutations = config.permutations;
  r.p_value = (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(config.permutations));
  r.alpha = config.alpha;
  r.reject = r.p_value <= config.alpha;
  r.seed = config.seed;
  return r;
}

TestReport independence_test(std::span<const double> data, const BaseFunction& u, const TestConfig& config) {
  validate_test_config(config);
  if (data.size() < 2 * config.n_block) {
    fail(ErrorKind::Size, "need at least 2 blocks of " + std::to_string(config.n_block) + " values");
  }
  const auto pairs = block_pairs(data, u, config.n_block);
  auto r = permutation_test(pairs, config);
  r.statistic_name = u.label();
  r.config = {{"source", "data"},
              {"n_values", data.size()},
              {"statistic", describe(u)},
              {"n_block", config.n_block},
              {"permutations", config.permutations},
              {"alpha", config.alpha},
              {"seed", config.seed}};
  return r;
}

TestReport independence_test(const DistributionSpec& spec, std::size_t n_blocks, const BaseFunction& u,
                             const TestConfig& config) {
  validate_test_config(config);
  const auto pairs = dependence_pairs(spec, u, config.n_block, n_blocks, StreamFactory(config.seed, kDataDomain));
  auto r = permutation_test(pairs, config);
  r.statistic_name = u.label();
  r.config = {{"source", "simulation"},
              {"distribution", to_json(spec)},
              {"n_blocks", n_blocks},
              {"statistic", describe(u)},
              {"n_block", config.n_block},
              {"permutations", config.permutations},
              {"alpha", config.alpha},
              {"seed", config.seed}};
  return r;
}

double TStarTable::quantile(double level) const {
  const auto it = quantiles.find(level);
  if (it == quantiles.end()) fail(ErrorKind::Parameter, "level " + std::to_string(level) + " is not in the table");
  return it->second;
}

namespace {

std::vector<double> simulate_tstar(const BaseFunction& u, std::size_t n, std::size_t reps, const StreamFactory& streams) {
  const std::size_t chunks = (reps + kRepsPerStream - 1) / kRepsPerStream;
  const auto parts = parallel_map(chunks, [&](std::size_t c) {
    auto eng = streams.stream(c);
    const std::size_t count = std::min(reps, (c + 1) * kRepsPerStream) - c * kRepsPerStream;
    std::vector<double> out(count);
    for (auto& v : out) {
      const auto s = OrderedSample::from_unsorted(standard_normal_vector(eng, n));
      v = s.mean() / statistic(u, s);
    }
    return out;
  });
  std::vector<double> all;
  all.reserve(reps);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

void validate_degree_one(const BaseFunction& u, std::size_t n) {
  if (n < 3) fail(ErrorKind::Size, "n must be >= 3");
  if (u.arity() != n) fail(ErrorKind::Size, "base function arity does not match n");
  if (u.effective_degree() != 1.0) fail(ErrorKind::Parameter, "T* needs a degree-1 base function");
}

}  // namespace

TStarTable tstar_table(const BaseFunction& u, std::size_t n, std::size_t reps, std::span<const double> levels,
                       std::uint64_t seed) {
  validate_degree_one(u, n);
  if (reps < 10000) fail(ErrorKind::Parameter, "T* tables need reps >= 10^4");
  if (levels.empty()) fail(ErrorKind::Parameter, "at least one level is required");
  for (double p : levels) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::Parameter, "levels must lie in (0, 1)");
  }

  auto values = simulate_tstar(u, n, reps, StreamFactory(seed, kTStarDomain));
  std::sort(values.begin(), values.end());

  TStarTable t;
  t.statistic_name = u.label();
  t.n = n;
  t.reps = reps;
  t.seed = seed;
  for (double p : levels) {
    const double raw = quantile_sorted(values, p);
    t.raw_quantiles[p] = raw;
    // The T* law is symmetric about 0 under normality.
    t.quantiles[p] = 0.5 * (raw - quantile_sorted(values, 1.0 - p));
  }
  t.config = {{"statistic", describe(u)},
              {"n", n},
              {"reps", reps},
              {"levels", std::vector<double>(levels.begin(), levels.end())},
              {"seed", seed}};
  return t;
}

double interval_coverage(const BaseFunction& u, std::size_t n, double q, std::size_t reps, std::uint64_t seed) {
  validate_degree_one(u, n);
  if (reps < 1) fail(ErrorKind::Parameter, "reps must be >= 1");
  const auto values = simulate_tstar(u, n, reps, StreamFactory(seed, kCoverageDomain));
  const auto covered = std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v) <= q; });
  return static_cast<double>(covered) / static_cast<double>(reps);
}

nlohmann::json to_json(const TestReport& r) {
  return {{"statistic_name", r.statistic_name},
          {"n_block", r.n_block},
          {"n_blocks", r.n_blocks},
          {"dcov", r.dcov},
          {"p_value", r.p_value},
          {"permutations", r.permutations},
          {"reject", r.reject},
          {"alpha", r.alpha},
          {"seed", r.seed},
          {"config", r.config}};
}

nlohmann::json to_json(const TStarTable& t) {
  auto levels = [](const std::map<double, double>& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, q] : m) arr.push_back({{"level", p}, {"quantile", q}});
    return arr;
  };
  return {{"statistic_name", t.statistic_name},
          {"n", t.n},
          {"reps", t.reps},
          {"quantiles", levels(t.quantiles)},
          {"seed", t.seed},
          {"metadata", {{"raw_quantiles", levels(t.raw_quantiles)}}},
          {"config", t.config}};
}

}  // namespace fdstat
