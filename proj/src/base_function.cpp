#include "fdstat/base_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fdstat/error.hpp"
#include "fdstat/summation.hpp"

namespace fdstat {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::Linear: return "Linear";
    case Family::PowerSum: return "PowerSum";
    case Family::PairwisePower: return "PairwisePower";
    case Family::QuadraticForm: return "QuadraticForm";
    case Family::MixedPower: return "MixedPower";
    case Family::Custom: return "Custom";
  }
  return "Unknown";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::Linear, Family::PowerSum, Family::PairwisePower, Family::QuadraticForm,
                   Family::MixedPower, Family::Custom}) {
    if (s == to_string(f)) return f;
  }
  fail(ErrorKind::Parse, "unknown base function family '" + s + "'");
}

namespace {

void require_arity(std::size_t n) {
  if (n < 2) fail(ErrorKind::Size, "base function arity must be >= 2, got " + std::to_string(n));
}

void require_finite(const std::vector<double>& a, const char* what) {
  for (double x : a) {
    if (!std::isfinite(x)) fail(ErrorKind::Parameter, std::string(what) + " coefficients must be finite");
  }
}

void require_exponent(double p, const char* name) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    fail(ErrorKind::Parameter, std::string("exponent ") + name + " must be finite and > 0");
  }
}

void require_matrix(std::size_t n, const std::vector<double>& a) {
  if (a.size() != n * n) {
    fail(ErrorKind::Size, "expected " + std::to_string(n * n) + " matrix coefficients, got " + std::to_string(a.size()));
  }
}

// |x|^p with the common exponents special-cased for accuracy.
double abs_pow(double x, double p) {
  const double ax = std::abs(x);
  if (p == 1.0) return ax;
  if (p == 2.0) return ax * ax;
  return std::pow(ax, p);
}

// Positive definiteness of the symmetric part via Cholesky with diagonal
// pivoting; every pivot must be positive.
bool symmetric_part_positive_definite(std::size_t n, const std::vector<double>& a) {
  std::vector<double> m(n * n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
      scale = std::max(scale, std::abs(m[i * n + j]));
    }
  }
  if (scale == 0.0) return false;
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(n);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[perm[i] * n + perm[i]] > m[perm[best] * n + perm[best]]) best = i;
    }
    std::swap(perm[k], perm[best]);
    const std::size_t pk = perm[k];
    const double pivot = m[pk * n + pk];
    if (!(pivot > eps)) return false;
    const double root = std::sqrt(pivot);
    for (std::size_t i = k + 1; i < n; ++i) m[perm[i] * n + pk] /= root;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= i; ++j) {
        const std::size_t pi = perm[i], pj = perm[j];
        m[pi * n + pj] -= m[pi * n + pk] * m[pj * n + pk];
        m[pj * n + pi] = m[pi * n + pj];
      }
    }
  }
  return true;
}

}  // namespace

BaseFunction BaseFunction::linear(std::vector<double> a) {
  require_arity(a.size());
  require_finite(a, "Linear");
  BaseFunction u;
  u.family_ = Family::Linear;
  u.n_ = a.size();
  u.degree_ = 1.0;
  u.p_ = 1.0;
  u.a_ = std::move(a);
  u.label_ = "linear";
  return u;
}

BaseFunction BaseFunction::power_sum(double p, std::vector<double> a) {
  require_arity(a.size());
  require_exponent(p, "p");
  require_finite(a, "PowerSum");
  BaseFunction u;
  u.family_ = Family::PowerSum;
  u.n_ = a.size();
  u.degree_ = p;
  u.p_ = p;
  u.a_ = std::move(a);
  u.label_ = "power_sum";
  return u;
}

BaseFunction BaseFunction::pairwise_power(double p, std::size_t n, std::vector<double> a) {
  require_arity(n);
  require_exponent(p, "p");
  require_matrix(n, a);
  require_finite(a, "PairwisePower");
  BaseFunction u;
  u.family_ = Family::PairwisePower;
  u.n_ = n;
  u.degree_ = p;
  u.p_ = p;
  u.a_ = std::move(a);
  u.label_ = "pairwise_power";
  return u;
}

BaseFunction BaseFunction::quadratic_form(std::size_t n, std::vector<double> a) {
  require_arity(n);
  require_matrix(n, a);
  require_finite(a, "QuadraticForm");
  if (!symmetric_part_positive_definite(n, a)) {
    fail(ErrorKind::Parameter, "QuadraticForm matrix is not positive definite");
  }
  BaseFunction u;
  u.family_ = Family::QuadraticForm;
  u.n_ = n;
  u.degree_ = 2.0;
  u.p_ = 2.0;
  u.a_ = std::move(a);
  u.label_ = "quadratic_form";
  return u;
}

BaseFunction BaseFunction::mixed_power(double p, double q, std::size_t n, std::vector<double> a) {
  require_arity(n);
  require_exponent(p, "p");
  require_exponent(q, "q");
  require_matrix(n, a);
  require_finite(a, "MixedPower");
  BaseFunction u;
  u.family_ = Family::MixedPower;
  u.n_ = n;
  u.degree_ = p + q;
  u.p_ = p;
  u.q_ = q;
  u.a_ = std::move(a);
  u.label_ = "mixed_power";
  return u;
}

BaseFunction BaseFunction::custom(std::string label, std::size_t n, double degree, Callback fn) {
  require_arity(n);
  require_exponent(degree, "degree");
  if (!fn) fail(ErrorKind::Parameter, "Custom base function needs a callback");
  BaseFunction u;
  u.family_ = Family::Custom;
  u.n_ = n;
  u.degree_ = degree;
  u.p_ = degree;
  u.label_ = std::move(label);
  u.custom_ = std::make_shared<const Callback>(std::move(fn));
  return u;
}

BaseFunction BaseFunction::range(std::size_t n) {
  require_arity(n);
  std::vector<double> a(n, 0.0);
  a.front() = -1.0;
  a.back() = 1.0;
  return linear(std::move(a)).with_label("range");
}

BaseFunction BaseFunction::gini(std::size_t n) {
  require_arity(n);
  const double nn = static_cast<double>(n);
  return pairwise_power(1.0, n, std::vector<double>(n * n, 1.0 / (nn * (nn - 1.0)))).with_label("gini");
}

BaseFunction BaseFunction::variance(std::size_t n) {
  require_arity(n);
  return power_sum(2.0, std::vector<double>(n, 1.0 / (static_cast<double>(n) - 1.0))).with_label("variance");
}

BaseFunction BaseFunction::sample_sd(std::size_t n) { return variance(n).root_normalized().with_label("sd"); }

BaseFunction BaseFunction::standard_error(std::size_t n) {
  require_arity(n);
  const double nn = static_cast<double>(n);
  return power_sum(2.0, std::vector<double>(n, 1.0 / (nn * (nn - 1.0))))
      .root_normalized()
      .with_label("standard_error");
}

BaseFunction BaseFunction::preset(const std::string& name, std::size_t n) {
  if (name == "range") return range(n);
  if (name == "gini") return gini(n);
  if (name == "variance") return variance(n);
  if (name == "sd") return sample_sd(n);
  if (name == "standard_error") return standard_error(n);
  fail(ErrorKind::Parameter, "unknown preset '" + name + "' (expected range, gini, variance, sd or standard_error)");
}

BaseFunction BaseFunction::root_normalized() const {
  BaseFunction u = *this;
  u.root_ = true;
  return u;
}

BaseFunction BaseFunction::with_label(std::string label) const {
  BaseFunction u = *this;
  u.label_ = std::move(label);
  return u;
}

std::vector<std::string> BaseFunction::sufficient_condition_warnings() const {
  std::vector<std::string> w;
  const auto& a = a_;
  const std::size_t n = n_;
  switch (family_) {
    case Family::Linear: {
      if (!std::is_sorted(a.begin(), a.end())) w.emplace_back("Linear: coefficients are not nondecreasing");
      if (std::all_of(a.begin(), a.end(), [&](double x) { return x == a.front(); })) {
        w.emplace_back("Linear: coefficients are all equal");
      }
      break;
    }
    case Family::PowerSum: {
      if (!(a.front() > 0.0)) w.emplace_back("PowerSum: a_1 > 0 is violated");
      if (!(a.back() > 0.0)) w.emplace_back("PowerSum: a_n > 0 is violated");
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (a[i] < 0.0) {
          w.emplace_back("PowerSum: a_i >= 0 is violated for 1 < i < n");
          break;
        }
      }
      break;
    }
    case Family::PairwisePower: {
      if (std::any_of(a.begin(), a.end(), [](double x) { return x < 0.0; })) {
        w.emplace_back("PairwisePower: a_ij >= 0 is violated");
      }
      if (!(a[n - 1] + a[(n - 1) * n] > 0.0)) w.emplace_back("PairwisePower: a_1n + a_n1 > 0 is violated");
      break;
    }
    case Family::QuadraticForm: break;  // positive definiteness is enforced at construction
    case Family::MixedPower: {
      if (std::any_of(a.begin(), a.end(), [](double x) { return x < 0.0; })) {
        w.emplace_back("MixedPower: a_ij >= 0 is violated");
      }
      if (!(a[0] > 0.0)) w.emplace_back("MixedPower: a_11 > 0 is violated");
      if (!(a[n * n - 1] > 0.0)) w.emplace_back("MixedPower: a_nn > 0 is violated");
      break;
    }
    case Family::Custom: w.emplace_back("Custom: feasibility is not implied by any coefficient condition"); break;
  }
  return w;
}

double BaseFunction::raw(std::span<const double> x) const {
  const std::size_t n = n_;
  switch (family_) {
    case Family::Linear: {
      CompensatedSum s;
      for (std::size_t i = 0; i < n; ++i) s.add(a_[i] * x[i]);
      return s.value();
    }
    case Family::PowerSum: {
      CompensatedSum s;
      for (std::size_t i = 0; i < n; ++i) {
        if (a_[i] != 0.0) s.add(a_[i] * abs_pow(x[i], p_));
      }
      return s.value();
    }
    case Family::PairwisePower: {
      CompensatedSum s;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && a_[i * n + j] != 0.0) s.add(a_[i * n + j] * abs_pow(x[i] - x[j], p_));
        }
      }
      return s.value();
    }
    case Family::QuadraticForm: {
      CompensatedSum s;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) s.add(a_[i * n + j] * x[i] * x[j]);
      }
      return s.value();
    }
    case Family::MixedPower: {
      CompensatedSum s;
      for (std::size_t i = 0; i < n; ++i) {
        const double pi = abs_pow(x[i], p_);
        for (std::size_t j = 0; j < n; ++j) s.add(a_[i * n + j] * pi * abs_pow(x[j], q_));
      }
      return s.value();
    }
    case Family::Custom: return (*custom_)(x);
  }
  return std::nan("");
}

double BaseFunction::operator()(std::span<const double> point) const {
  const double v = raw(point);
  if (!root_ || degree_ == 1.0) return v;
  if (degree_ == 2.0) return std::sqrt(v);
  return std::pow(v, 1.0 / degree_);
}

double evaluate(const BaseFunction& u, std::span<const double> point) {
  if (point.size() != u.arity()) {
    fail(ErrorKind::Size, "point has " + std::to_string(point.size()) + " entries, base function arity is " +
                              std::to_string(u.arity()));
  }
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!std::isfinite(point[i])) fail(ErrorKind::Domain, "point has a non-finite entry");
    if (i > 0 && point[i] < point[i - 1]) fail(ErrorKind::Domain, "point is not sorted ascending");
    abs_sum += std::abs(point[i]);
  }
  const double sum = compensated_sum(point);
  if (std::abs(sum) > 1e-9 * abs_sum) fail(ErrorKind::Domain, "point does not sum to zero");
  return u(point);
}

double statistic(const BaseFunction& u, const OrderedSample& s) {
  if (s.size() != u.arity()) {
    fail(ErrorKind::Size, "sample size " + std::to_string(s.size()) + " does not match base function arity " +
                              std::to_string(u.arity()));
  }
  const auto d = s.centered();
  return u(d);
}

std::vector<double> uniform_point_on_ordered_sphere(Engine& eng, std::size_t n) {
  if (n < 2) fail(ErrorKind::Size, "A_n needs n >= 2");
  const double target = std::sqrt(static_cast<double>(n) - 1.0);
  for (;;) {
    auto v = standard_normal_vector(eng, n);
    const double mean = compensated_sum(v) / static_cast<double>(n);
    CompensatedSum ss;
    for (auto& x : v) {
      x -= mean;
      ss.add(x * x);
    }
    const double norm = std::sqrt(ss.value());
    if (!(norm > 1e-12)) continue;
    for (auto& x : v) x *= target / norm;
    std::sort(v.begin(), v.end());
    return v;
  }
}

VerificationReport check_feasibility(const BaseFunction& u, std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n < 3) fail(ErrorKind::Size, "feasibility check needs n >= 3");
  if (n != u.arity()) fail(ErrorKind::Size, "n does not match base function arity");
  if (trials < 1) fail(ErrorKind::Parameter, "trials must be >= 1");

  constexpr double kHomogeneityTol = 1e-8;
  const double p = u.effective_degree();
  const StreamFactory streams(seed, /*domain=*/0xfea5);

  double min_u = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double worst_homogeneity = 0.0;
  std::vector<double> argmin, worst_point;
  std::size_t nonfinite = 0;

  // One stream per trial keeps the draws independent of evaluation order.
  for (std::size_t t = 0; t < trials; ++t) {
    auto eng = streams.stream(t);
    auto lambda = uniform_point_on_ordered_sphere(eng, n);
    const double s = 10.0 * (1.0 - uniform01(eng));  // (0, 10]
    const double ul = u(lambda);
    std::vector<double> scaled(lambda);
    for (auto& x : scaled) x *= s;
    const double us = u(scaled);
    if (!std::isfinite(ul) || !std::isfinite(us)) {
      ++nonfinite;
      continue;
    }
    if (ul < min_u) {
      min_u = ul;
      argmin = lambda;
    }
    max_u = std::max(max_u, ul);
    const double expected = std::pow(s, p) * ul;
    const double err = expected != 0.0 ? std::abs(us - expected) / std::abs(expected) : std::abs(us);
    if (err > worst_homogeneity) {
      worst_homogeneity = err;
      worst_point = lambda;
    }
  }

  VerificationReport r;
  r.check_name = "feasibility:" + u.label();
  r.measured = worst_homogeneity;
  r.tolerance = kHomogeneityTol;
  r.criterion = Criterion::Discrepancy;
  r.decide();
  // Definiteness: U must stay clear of zero on A_n, relative to its scale there.
  const double definiteness_floor = 1e-10 * std::max(std::abs(max_u), 1e-300);
  r.require(nonfinite == 0, "non-finite evaluations");
  r.require(min_u > definiteness_floor, "definiteness: U vanishes (or is negative) on A_n");
  r.metadata = {{"n", n},
                {"trials", trials},
                {"seed", seed},
                {"degree", p},
                {"min_u", min_u},
                {"max_u", max_u},
                {"definiteness_floor", definiteness_floor},
                {"max_homogeneity_rel_error", worst_homogeneity},
                {"warnings", u.sufficient_condition_warnings()},
                {"failed_conditions", r.metadata.value("failed_conditions", nlohmann::json::array())}};
  if (!argmin.empty()) r.witnesses.push_back(argmin);
  if (!worst_point.empty()) r.witnesses.push_back(worst_point);
  return r;
}

namespace {

// Projects onto A_n: centre, rescale to squared norm n-1, sort.
bool project_to_ordered_sphere(std::vector<double>& v) {
  const std::size_t n = v.size();
  const double mean = compensated_sum(v) / static_cast<double>(n);
  CompensatedSum ss;
  for (auto& x : v) {
    x -= mean;
    ss.add(x * x);
  }
  const double norm = std::sqrt(ss.value());
  if (!(norm > 1e-12)) return false;
  const double target = std::sqrt(static_cast<double>(n) - 1.0);
  for (auto& x : v) x *= target / norm;
  std::sort(v.begin(), v.end());
  return true;
}

struct SearchResult {
  std::vector<double> point;
  double value;
  std::size_t evaluations;
};

// Pair-exchange moves l_i += d, l_j -= d projected back onto A_n, with step
// halving whenever a full sweep makes no progress. sign = +1 maximises.
SearchResult local_search(const BaseFunction& u, std::vector<double> start, double sign) {
  constexpr int kMaxIterations = 100;
  const std::size_t n = start.size();
  double best = sign * u(start);
  std::size_t evals = 1;
  double step = 0.5;
  std::vector<double> trial(n);
  for (int it = 0; it < kMaxIterations; ++it) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        trial = start;
        trial[i] += step;
        trial[j] -= step;
        if (!project_to_ordered_sphere(trial)) continue;
        const double v = sign * u(trial);
        ++evals;
        if (v > best) {
          best = v;
          start = trial;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-15) break;
    }
  }
  return {std::move(start), sign * best, evals};
}

}  // namespace

BoundEstimate estimate_bounds(const BaseFunction& u, std::size_t n, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) fail(ErrorKind::Parameter, "budget must be >= 1");
  if (n < 3) fail(ErrorKind::Size, "bound estimation needs n >= 3");
  if (n != u.arity()) fail(ErrorKind::Size, "n does not match base function arity");
  if (u.effective_degree() != 1.0) {
    fail(ErrorKind::Parameter, "estimate_bounds needs a degree-1 base function; root-normalize it first");
  }

  constexpr std::size_t kStarts = 8;
  const StreamFactory streams(seed, /*domain=*/0xb0d5);

  struct Draw {
    double value;
    std::vector<double> point;
  };
  std::vector<Draw> draws;
  draws.reserve(budget);
  for (std::size_t t = 0; t < budget; ++t) {
    auto eng = streams.stream(t);
    auto p = uniform_point_on_ordered_sphere(eng, n);
    draws.push_back({u(p), std::move(p)});
  }
  std::sort(draws.begin(), draws.end(), [](const Draw& a, const Draw& b) { return a.value < b.value; });

  BoundEstimate out;
  out.evaluations = budget;
  out.lower = draws.front().value;
  out.argmin = draws.front().point;
  out.upper = draws.back().value;
  out.argmax = draws.back().point;

  const std::size_t starts = std::min(kStarts, draws.size());
  for (std::size_t s = 0; s < starts; ++s) {
    auto lo = local_search(u, draws[s].point, -1.0);
    out.evaluations += lo.evaluations;
    if (lo.value < out.lower) {
      out.lower = lo.value;
      out.argmin = std::move(lo.point);
    }
    auto hi = local_search(u, draws[draws.size() - 1 - s].point, +1.0);
    out.evaluations += hi.evaluations;
    if (hi.value > out.upper) {
      out.upper = hi.value;
      out.argmax = std::move(hi.point);
    }
  }
  return out;
}

}  // namespace fdstat
