#include "fdstat/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "fdstat/error.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/random.hpp"
#include "fdstat/verification.hpp"

namespace fdstat {

namespace {

constexpr std::size_t kMinCorpusN = 2;
constexpr std::size_t kMaxCorpusN = 12;

// Continuous draws for most samples; every third uses values in {0, 1, 2}
// so that ties and equality configurations are exercised.
std::vector<double> corpus_draw(Engine& eng, std::size_t n, std::size_t k) {
  for (;;) {
    std::vector<double> v(n);
    if (k % 3 == 2) {
      for (auto& x : v) x = std::floor(3.0 * uniform01(eng));
    } else if (k % 3 == 1) {
      for (auto& x : v) x = -std::log1p(-uniform01(eng));
    } else {
      v = standard_normal_vector(eng, n);
    }
    std::sort(v.begin(), v.end());
    if (v.back() > v.front()) return v;
  }
}

std::vector<std::size_t> n_values(const SuiteConfig& c, std::size_t lo, std::size_t hi) {
  if (c.n) {
    if (*c.n < lo || *c.n > hi) {
      fail(ErrorKind::Parameter,
           "n = " + std::to_string(*c.n) + " is outside the supported range [" + std::to_string(lo) + ", " +
               std::to_string(hi) + "]");
    }
    return {*c.n};
  }
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<double> ones_off_diagonal(std::size_t n) {
  std::vector<double> a(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 0.0;
  return a;
}

VerificationReport as_negative_control(VerificationReport r, double threshold) {
  const bool insufficient = r.metadata.value("quadrature_insufficient", false);
  r.check_name += ":negative_control";
  r.criterion = Criterion::Exceedance;
  r.tolerance = threshold;
  r.metadata.erase("failed_conditions");
  r.decide();
  r.require(!insufficient, "quadrature error estimate exceeds the tolerance; raise cells");
  return r;
}

void append(std::vector<VerificationReport>& out, std::vector<VerificationReport> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

std::vector<VerificationReport> inequalities_suite(const SuiteConfig& c) {
  std::vector<VerificationReport> out;
  for (std::size_t n : n_values(c, kMinCorpusN, kMaxCorpusN)) {
    out.push_back(order_correlation_corpus_check(n, c.corpus, c.seed));
    out.push_back(range_gini_corpus_check(n, c.corpus, c.seed));
    out.push_back(range_upper_witness_check(n));
  }
  out.push_back(two_point_identities_check(c.corpus, c.seed));

  const StreamFactory streams(c.seed, 0x1de7);
  VerificationReport worst;
  worst.check_name = "pairwise_square_identity";
  worst.measured = -1.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, c.trials); ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 2 + k % 11;
    auto r = pairwise_square_identity_check(standard_normal_vector(eng, n));
    if (!r.passed || r.measured > worst.measured) worst = r;
    if (!r.passed) break;
  }
  worst.metadata["samples"] = c.trials;
  out.push_back(worst);

  // Fixed examples with known ratios.
  const auto spread = OrderedSample::from_unsorted(std::vector<double>{1.0, 2.0, 4.0});
  out.push_back(definite_ratio_bounds_check(BaseFunction::gini(3), spread));
  std::vector<double> range_as_pairs(9, 0.0);
  range_as_pairs[2] = 1.0;
  const auto range_pp = BaseFunction::pairwise_power(1.0, 3, range_as_pairs).with_label("range_pairwise");
  out.push_back(definite_ratio_bounds_check(range_pp, OrderedSample::from_unsorted(std::vector<double>{-1.0, 0.0, 1.0})));
  return out;
}

std::vector<VerificationReport> transform_suite(const SuiteConfig& c) {
  std::vector<VerificationReport> out;
  for (std::size_t n : n_values(c, 3, 10)) {
    out.push_back(round_trip_check(n, c.corpus, c.seed));
    out.push_back(jacobian_oracle_check(n, c.trials, c.seed));
  }
  if (!c.n || *c.n == 3) out.push_back(empirical_t1_law_check(std::max<std::size_t>(c.corpus, 100000), 50, c.seed));
  return out;
}

struct DensityPlan {
  std::size_t cells;
  double tolerance;
};

DensityPlan density_plan(std::size_t n) {
  static const std::map<std::size_t, DensityPlan> plans{
      {3, {4, 1e-6}}, {4, {8, 1e-4}}, {5, {8, 1e-3}}, {6, {4, 1e-3}}, {7, {2, 1e-3}}};
  return plans.at(n);
}

std::vector<VerificationReport> density_suite(const SuiteConfig& c) {
  std::vector<VerificationReport> out;
  const auto ns = c.n ? n_values(c, 3, 7) : std::vector<std::size_t>{3, 4, 5};
  for (std::size_t n : ns) {
    const auto plan = density_plan(n);
    out.push_back(density_normalization_check(n, plan.cells, plan.tolerance));
  }
  return out;
}

std::vector<VerificationReport> integro_functional_suite(const SuiteConfig& c) {
  std::vector<VerificationReport> out;
  const std::size_t n = c.n.value_or(3);
  if (n != 3 && n != 4) fail(ErrorKind::Parameter, "the integro-functional suite supports n = 3 or 4");
  for (const auto& u : {BaseFunction::range(n), BaseFunction::gini(n)}) {
    out.push_back(integro_functional_check(u, n));
    IntegroFunctionalConfig laplace;
    laplace.density = ParentDensity::Laplace;
    laplace.tolerance = 1e-2;
    out.push_back(as_negative_control(integro_functional_check(u, n, laplace), 1e-2));
  }
  for (std::size_t m : {std::size_t{3}, std::size_t{5}}) {
    for (const auto& u : catalog(m)) {
      out.push_back(check_feasibility(u, m, c.trials, c.seed));
      const auto unit = u.effective_degree() == 1.0 ? u : u.root_normalized();
      out.push_back(sigma_conditions_check(unit, m, c.trials, c.seed));
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"inequalities", "transform", "density", "anosov", "all"};
  return names;
}

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteConfig& config) {
  if (name == "inequalities") return inequalities_suite(config);
  if (name == "transform") return transform_suite(config);
  if (name == "density") return density_suite(config);
  if (name == "anosov") return integro_functional_suite(config);
  if (name == "all") {
    std::vector<VerificationReport> out;
    // A fixed n only applies where the suite supports it.
    auto restricted = [&](std::size_t lo, std::size_t hi) {
      SuiteConfig c = config;
      if (c.n && (*c.n < lo || *c.n > hi)) c.n.reset();
      return c;
    };
    append(out, inequalities_suite(restricted(kMinCorpusN, kMaxCorpusN)));
    append(out, transform_suite(restricted(3, 10)));
    append(out, density_suite(restricted(3, 7)));
    append(out, integro_functional_suite(restricted(3, 4)));
    return out;
  }
  fail(ErrorKind::Parameter, "unknown suite '" + name + "'");
}

VerificationReport order_correlation_corpus_check(std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::Size, "the order-correlation bound needs n >= 2");
  const StreamFactory streams(seed, 0xbe7e + 1000 * n);
  const double bound = 1.0 / (static_cast<double>(n) - 1.0);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> witness;
  std::size_t equality_hits = 0, unexplained = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    auto eng = streams.stream(k);
    const auto mu = corpus_draw(eng, n, k);
    const auto lambda = corpus_draw(eng, n, k);
    const double slack = order_correlation_ratio(mu, lambda) - bound;
    if (slack <= 1e-12) {
      ++equality_hits;
      if (order_correlation_equality_case(mu, lambda) == OrderCorrelationEquality::None) ++unexplained;
    }
    if (slack < worst) {
      worst = slack;
      witness = {mu, lambda};
    }
  }
  VerificationReport r;
  r.check_name = "order_correlation_corpus";
  r.criterion = Criterion::Slack;
  r.measured = worst;
  r.tolerance = 1e-12;
  r.witnesses = witness;
  r.metadata = {{"n", n},
                {"samples", samples},
                {"seed", seed},
                {"bound", bound},
                {"equality_witnesses", equality_hits},
                {"unexplained_equalities", unexplained}};
  r.decide();
  r.require(unexplained == 0, "equality attained outside the known equality cases");
  return r;
}

VerificationReport range_gini_corpus_check(std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::Size, "the corpus needs n >= 2");
  const StreamFactory streams(seed, 0x6a9e + 1000 * n);
  const auto gini = BaseFunction::gini(n);
  const double lower = std::numbers::sqrt2;
  double worst_range = std::numeric_limits<double>::infinity();
  double worst_gini = std::numeric_limits<double>::infinity();
  double min_range_excess = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  for (std::size_t k = 0; k < samples; ++k) {
    auto eng = streams.stream(k);
    const auto s = OrderedSample::from_unsorted(corpus_draw(eng, n, k));
    const auto range = range_inequality_check(s);
    const auto bounds = definite_ratio_bounds_check(gini, s);
    if (std::min(range.measured, bounds.measured) < std::min(worst_range, worst_gini)) {
      witness.assign(s.values().begin(), s.values().end());
    }
    worst_range = std::min(worst_range, range.measured);
    worst_gini = std::min(worst_gini, bounds.measured);
    if (n >= 3) {
      min_range_excess = std::min(min_range_excess, range.metadata["ratio"].get<double>() - lower);
      min_gap = std::min(min_gap, sample_range(s) - gini_mean_difference(s));
    }
  }
  VerificationReport r;
  r.check_name = "range_gini_corpus";
  r.criterion = Criterion::Slack;
  r.measured = std::min(worst_range, worst_gini);
  r.tolerance = 1e-12;
  if (!witness.empty()) r.witnesses.push_back(witness);
  r.metadata = {{"n", n},
                {"samples", samples},
                {"seed", seed},
                {"range_slack", worst_range},
                {"gini_slack", worst_gini}};
  r.decide();
  if (n >= 3) {
    r.metadata["min_range_ratio_minus_sqrt2"] = min_range_excess;
    r.metadata["min_range_minus_gini"] = min_gap;
    r.require(min_range_excess > 0.0, "range ratio reached sqrt(2) for n >= 3");
    r.require(min_gap > 0.0, "Gini mean difference reached the range for n >= 3");
  }
  return r;
}

VerificationReport range_upper_witness_check(std::size_t n) {
  if (n < 2) fail(ErrorKind::Size, "the witness needs n >= 2");
  std::vector<double> x(n, 0.0);
  x.front() = -1.0;
  x.back() = 1.0;
  const auto s = OrderedSample::from_unsorted(x);
  const double ratio = sample_range(s) / s.sd();
  const double upper = std::sqrt(2.0 * (static_cast<double>(n) - 1.0));
  VerificationReport r;
  r.check_name = "range_upper_witness";
  r.criterion = Criterion::Discrepancy;
  r.measured = std::abs(ratio - upper) / upper;
  r.tolerance = 1e-12;
  r.witnesses.push_back(x);
  r.metadata = {{"n", n}, {"ratio", ratio}, {"upper", upper}};
  r.decide();
  return r;
}

VerificationReport two_point_identities_check(std::size_t pairs, std::uint64_t seed, double tolerance) {
  const StreamFactory streams(seed, 0x2002);
  double worst_var = 0.0, worst_gini = 0.0;
  std::vector<double> witness;
  for (std::size_t k = 0; k < pairs; ++k) {
    auto eng = streams.stream(k);
    const auto raw = standard_normal_vector(eng, 2);
    if (raw[0] == raw[1]) continue;
    const auto s = OrderedSample::from_unsorted(raw);
    const double r2 = sample_range(s);
    const double var_err = std::abs(s.sd() * s.sd() - 0.5 * r2 * r2) / (0.5 * r2 * r2);
    const double gini_err = std::abs(gini_mean_difference(s) - r2) / r2;
    if (std::max(var_err, gini_err) > std::max(worst_var, worst_gini)) witness = raw;
    worst_var = std::max(worst_var, var_err);
    worst_gini = std::max(worst_gini, gini_err);
  }
  VerificationReport r;
  r.check_name = "two_point_identities";
  r.criterion = Criterion::Discrepancy;
  r.measured = std::max(worst_var, worst_gini);
  r.tolerance = tolerance;
  if (!witness.empty()) r.witnesses.push_back(witness);
  r.metadata = {{"pairs", pairs}, {"seed", seed}, {"variance_rel_error", worst_var}, {"gini_rel_error", worst_gini}};
  r.decide();
  return r;
}

std::vector<BaseFunction> catalog(std::size_t n) {
  std::vector<double> identity(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) identity[i * n + i] = 1.0;
  return {
      BaseFunction::range(n),
      BaseFunction::gini(n),
      BaseFunction::variance(n),
      BaseFunction::sample_sd(n),
      BaseFunction::standard_error(n),
      BaseFunction::power_sum(1.0, std::vector<double>(n, 1.0)).with_label("abs_sum"),
      BaseFunction::power_sum(3.0, std::vector<double>(n, 1.0)).with_label("cube_sum"),
      BaseFunction::pairwise_power(2.0, n, ones_off_diagonal(n)).with_label("pairwise_squares"),
      BaseFunction::quadratic_form(n, identity).with_label("squared_norm"),
      BaseFunction::mixed_power(1.0, 2.0, n, std::vector<double>(n * n, 1.0)).with_label("mixed_1_2"),
      BaseFunction::custom("max_abs", n, 1.0,
                           [](std::span<const double> l) { return std::max(std::abs(l.front()), std::abs(l.back())); }),
  };
}

}  // namespace fdstat
