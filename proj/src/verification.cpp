#include "fdstat/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fdstat/error.hpp"
#include "fdstat/quadrature.hpp"
#include "fdstat/random.hpp"
#include "fdstat/summation.hpp"
#include "fdstat/transform.hpp"

namespace fdstat {

namespace {

struct DivisorNMoments {
  double mean;
  double sd;
};

DivisorNMoments moments_divisor_n(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = compensated_sum(v) / n;
  CompensatedSum ss;
  for (double x : v) ss.add((x - mean) * (x - mean));
  return {mean, std::sqrt(ss.value() / n)};
}

void require_sorted(std::span<const double> v, const char* name) {
  if (!std::is_sorted(v.begin(), v.end())) {
    fail(ErrorKind::Domain, std::string(name) + " must be sorted ascending");
  }
}

bool all_equal(std::span<const double> v, double tol) {
  return v.back() - v.front() <= tol;
}

double relative_slack(double value, double lower, double upper) {
  return std::min((value - lower) / std::abs(lower), (upper - value) / std::abs(upper));
}

}  // namespace

double order_correlation_ratio(std::span<const double> mu, std::span<const double> lambda) {
  if (mu.size() != lambda.size()) fail(ErrorKind::Size, "vectors must have equal length");
  if (mu.size() < 2) fail(ErrorKind::Size, "order correlation needs n >= 2");
  require_sorted(mu, "mu");
  require_sorted(lambda, "lambda");
  const auto m = moments_divisor_n(mu);
  const auto l = moments_divisor_n(lambda);
  if (!(m.sd > 0.0) || !(l.sd > 0.0)) fail(ErrorKind::Degeneracy, "order correlation needs non-constant vectors");
  CompensatedSum cov;
  for (std::size_t i = 0; i < mu.size(); ++i) cov.add((mu[i] - m.mean) * (lambda[i] - l.mean));
  return cov.value() / static_cast<double>(mu.size()) / (m.sd * l.sd);
}

OrderCorrelationEquality order_correlation_equality_case(std::span<const double> mu, std::span<const double> lambda,
                                          double tolerance) {
  const std::size_t n = mu.size();
  if (n != lambda.size() || n < 2) return OrderCorrelationEquality::None;
  if (n == 2) return OrderCorrelationEquality::TwoPoints;
  if (all_equal(mu.subspan(1), tolerance) && all_equal(lambda.first(n - 1), tolerance)) {
    return OrderCorrelationEquality::LowerTail;
  }
  if (all_equal(mu.first(n - 1), tolerance) && all_equal(lambda.subspan(1), tolerance)) {
    return OrderCorrelationEquality::UpperTail;
  }
  return OrderCorrelationEquality::None;
}

VerificationReport range_inequality_check(const OrderedSample& s, double tolerance) {
  if (!(s.sd() > 0.0)) fail(ErrorKind::Degeneracy, "range inequality needs a non-constant sample");
  const double n = static_cast<double>(s.size());
  const double ratio = sample_range(s) / s.sd();
  const double lower = std::numbers::sqrt2;
  const double upper = std::sqrt(2.0 * (n - 1.0));

  VerificationReport r;
  r.check_name = "range_inequality";
  r.criterion = Criterion::Slack;
  r.measured = relative_slack(ratio, lower, upper);
  r.tolerance = tolerance;
  r.metadata = {{"n", s.size()}, {"ratio", ratio}, {"lower", lower}, {"upper", upper}};
  r.witnesses.emplace_back(s.values().begin(), s.values().end());
  r.decide();
  return r;
}

VerificationReport definite_ratio_bounds_check(const BaseFunction& u, const OrderedSample& s, double tolerance) {
  if (u.family() != Family::PairwisePower || u.is_root_normalized()) {
    fail(ErrorKind::Parameter, "ratio bounds apply to (non-root-normalized) PairwisePower base functions");
  }
  if (!(s.sd() > 0.0)) fail(ErrorKind::Degeneracy, "ratio bounds need a non-constant sample");
  const std::size_t n = u.arity();
  const double nn = static_cast<double>(n);
  const double p = u.p();
  const auto& a = u.coefficients();

  double max_off = -std::numeric_limits<double>::infinity();
  bool gini_config = p == 1.0;
  const double gini_coef = 1.0 / (nn * (nn - 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      max_off = std::max(max_off, a[i * n + j]);
      if (std::abs(a[i * n + j] - gini_coef) > 1e-15 * gini_coef) gini_config = false;
    }
  }

  const double ratio = statistic(u, s) / std::pow(s.sd(), p);
  const double lower = (a[n - 1] + a[(n - 1) * n]) * std::pow(std::numbers::sqrt2, p);
  const double upper = max_off * nn * (nn - 1.0) * std::pow(std::sqrt(2.0 * (nn - 1.0)), p);

  VerificationReport r;
  r.check_name = "definite_ratio_bounds:" + u.label();
  r.criterion = Criterion::Slack;
  r.measured = relative_slack(ratio, lower, upper);
  r.tolerance = tolerance;
  r.metadata = {{"n", n}, {"p", p}, {"ratio", ratio}, {"lower", lower}, {"upper", upper}, {"gini_configuration", gini_config}};
  r.witnesses.emplace_back(s.values().begin(), s.values().end());
  r.decide();
  if (gini_config) {
    const double g_lower = 2.0 * std::numbers::sqrt2 / (nn * (nn - 1.0));
    const double g_upper = std::sqrt(2.0 * (nn - 1.0));
    const double g_slack = relative_slack(ratio, g_lower, g_upper);
    r.metadata["gini_lower"] = g_lower;
    r.metadata["gini_upper"] = g_upper;
    r.metadata["gini_slack"] = g_slack;
    r.measured = std::min(r.measured, g_slack);
    r.decide();
  }
  return r;
}

const char* to_string(ParentDensity d) noexcept {
  switch (d) {
    case ParentDensity::Normal: return "normal";
    case ParentDensity::Laplace: return "laplace";
  }
  return "unknown";
}

double parent_density(ParentDensity d, double x) noexcept {
  switch (d) {
    case ParentDensity::Normal: return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case ParentDensity::Laplace: return 0.5 * std::exp(-std::abs(x));
  }
  return std::nan("");
}

VerificationReport integro_functional_check(const BaseFunction& u, std::size_t n, const IntegroFunctionalConfig& config) {
  if (n != 3 && n != 4) fail(ErrorKind::Parameter, "the integro-functional check supports n = 3 or 4");
  if (u.arity() != n) fail(ErrorKind::Size, "n does not match base function arity");
  if (u.effective_degree() != 1.0) fail(ErrorKind::Parameter, "the integro-functional check needs a degree-1 U");
  if (config.xbar_grid.empty() || config.z_grid.empty()) fail(ErrorKind::Parameter, "grids must be non-empty");
  for (double z : config.z_grid) {
    if (!(z >= 0.0) || !std::isfinite(z)) fail(ErrorKind::Parameter, "z grid must be finite and nonnegative");
  }

  const double nn = static_cast<double>(n);
  const auto density = config.density;

  // integral of U^-(n-1) f^-1/2 prod_i f_X(shift + z l_i / U)
  auto side = [&](double shift, double z) {
    return integrate_over_region(n, config.cells, [&](std::span<const double> t, double f_last) {
      const auto lambda = inverse_map(t, f_last, 0.0, 1.0);
      const double ul = u(lambda);
      double prod = std::pow(ul, -(nn - 1.0));
      for (double l : lambda) prod *= parent_density(density, shift + z * l / ul);
      return prod;
    });
  };

  const double c_const = std::pow(parent_density(density, 0.0), -nn);
  double worst = 0.0;
  double worst_quadrature = 0.0;
  std::vector<double> worst_point;
  nlohmann::json grid = nlohmann::json::array();
  for (double z : config.z_grid) {
    const auto base = side(0.0, z);
    worst_quadrature = std::max(worst_quadrature, base.est_error / std::abs(base.value));
    for (double xbar : config.xbar_grid) {
      const auto lhs = side(xbar, z);
      worst_quadrature = std::max(worst_quadrature, lhs.est_error / std::abs(lhs.value));
      const double rhs = c_const * std::pow(parent_density(density, xbar), nn) * base.value;
      const double scale = std::max(std::abs(lhs.value), std::abs(rhs));
      const double rel = scale > 0.0 ? std::abs(lhs.value - rhs) / scale : 0.0;
      grid.push_back({{"xbar", xbar}, {"z", z}, {"lhs", lhs.value}, {"rhs", rhs}, {"relative_discrepancy", rel}});
      if (rel >= worst) {
        worst = rel;
        worst_point = {xbar, z};
      }
    }
  }

  VerificationReport r;
  r.check_name = std::string("integro_functional:") + to_string(density) + ":" + u.label();
  r.criterion = Criterion::Discrepancy;
  r.measured = worst;
  r.tolerance = config.tolerance;
  r.witnesses.push_back(worst_point);
  r.metadata = {{"n", n},
                {"density", to_string(density)},
                {"cells", config.cells},
                {"constant_C", c_const},
                {"quadrature_rel_error_estimate", worst_quadrature},
                {"grid", grid}};
  r.decide();
  if (worst_quadrature > config.tolerance) {
    r.metadata["quadrature_insufficient"] = true;
    r.require(false, "quadrature error estimate exceeds the tolerance; raise cells");
  }
  return r;
}

VerificationReport sigma_conditions_check(const BaseFunction& u, std::size_t n, std::size_t trials,
                                          std::uint64_t seed) {
  if (n < 3) fail(ErrorKind::Size, "sigma conditions need n >= 3");
  if (u.arity() != n) fail(ErrorKind::Size, "n does not match base function arity");
  if (u.effective_degree() != 1.0) fail(ErrorKind::Parameter, "sigma conditions need a degree-1 U");
  if (trials < 1) fail(ErrorKind::Parameter, "trials must be >= 1");

  constexpr double kTol = 1e-10;
  const StreamFactory streams(seed, /*domain=*/0x5191);
  double worst_sum = 0.0, worst_norm = 0.0;
  std::vector<double> witness;
  const double nn = static_cast<double>(n);

  for (std::size_t k = 0; k < trials; ++k) {
    auto eng = streams.stream(k);
    const auto sample = OrderedSample::from_unsorted(standard_normal_vector(eng, n));
    const auto coords = forward(sample);
    const auto lambda = inverse_map(coords.t, coords.f.back(), 0.0, 1.0);
    const double ul = u(lambda);
    CompensatedSum s1, s2;
    for (double l : lambda) {
      s1.add(l / ul);
      s2.add((l / ul) * (l / ul));
    }
    const double expected = (nn - 1.0) / (ul * ul);
    const double e_sum = std::abs(s1.value());
    const double e_norm = std::abs(s2.value() - expected) / expected;
    if (e_sum > worst_sum || e_norm > worst_norm) witness = coords.t;
    worst_sum = std::max(worst_sum, e_sum);
    worst_norm = std::max(worst_norm, e_norm);
  }

  VerificationReport r;
  r.check_name = "sigma_conditions:" + u.label();
  r.criterion = Criterion::Discrepancy;
  r.measured = std::max(worst_sum, worst_norm);
  r.tolerance = kTol;
  r.metadata = {{"n", n}, {"trials", trials}, {"seed", seed}, {"max_abs_sum", worst_sum}, {"max_rel_norm_error", worst_norm}};
  if (!witness.empty()) r.witnesses.push_back(witness);
  r.decide();
  return r;
}

VerificationReport round_trip_check(std::size_t n, std::size_t samples, std::uint64_t seed, double tolerance) {
  const StreamFactory streams(seed, /*domain=*/0x7247);
  double worst = 0.0;
  std::vector<double> witness;
  for (std::size_t k = 0; k < samples; ++k) {
    auto eng = streams.stream(k);
    auto raw = standard_normal_vector(eng, n);
    // Vary location and scale so the check is not only about standardized data.
    const double loc = 10.0 * standard_normal(eng);
    const double scale = std::exp(2.0 * standard_normal(eng));
    for (auto& x : raw) x = loc + scale * x;
    const auto s = OrderedSample::from_unsorted(raw);
    const auto back = inverse(forward(s), n);
    double mag = 0.0, err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mag = std::max(mag, std::abs(s[i]));
      err = std::max(err, std::abs(back[i] - s[i]));
    }
    const double rel = err / mag;
    if (rel > worst) {
      worst = rel;
      witness.assign(s.values().begin(), s.values().end());
    }
  }
  VerificationReport r;
  r.check_name = "transform_round_trip";
  r.criterion = Criterion::Discrepancy;
  r.measured = worst;
  r.tolerance = tolerance;
  r.metadata = {{"n", n}, {"samples", samples}, {"seed", seed}};
  if (!witness.empty()) r.witnesses.push_back(witness);
  r.decide();
  return r;
}

namespace {

double determinant(std::vector<double> m, std::size_t n) {
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    }
    if (m[piv * n + k] == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      det = -det;
    }
    det *= m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m[i * n + k] / m[k * n + k];
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= factor * m[k * n + j];
    }
  }
  return det;
}

}  // namespace

VerificationReport jacobian_oracle_check(std::size_t n, std::size_t points, std::uint64_t seed, double tolerance) {
  if (n < 3) fail(ErrorKind::Size, "the transform needs n >= 3");
  const StreamFactory streams(seed, /*domain=*/0x1ac0);
  double worst = 0.0;
  std::vector<double> witness;
  std::size_t accepted = 0;
  for (std::uint64_t k = 0; accepted < points; ++k) {
    auto eng = streams.stream(k);
    const auto s = OrderedSample::from_unsorted(standard_normal_vector(eng, n));
    const auto c = forward(s);
    if (c.f.back() < 1e-3) continue;
    ++accepted;

    std::vector<double> v(c.t);
    v.push_back(3.0 * standard_normal(eng));
    v.push_back(0.5 + 2.5 * uniform01(eng));
    auto map = [&](const std::vector<double>& p) {
      return inverse_map(std::span<const double>(p.data(), n - 2), p[n - 2], p[n - 1]);
    };
    std::vector<double> jac(n * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(v[j]));
      auto plus = v, minus = v;
      plus[j] += h;
      minus[j] -= h;
      const auto xp = map(plus), xm = map(minus);
      for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (xp[i] - xm[i]) / (2.0 * h);
    }
    const double numeric = std::abs(determinant(jac, n));
    auto at = c;
    at.w1 = v[n - 2];
    at.w2 = v[n - 1];
    const double closed = jacobian_abs(at, n);
    const double rel = std::abs(numeric - closed) / closed;
    if (rel > worst) {
      worst = rel;
      witness = v;
    }
  }
  VerificationReport r;
  r.check_name = "jacobian_oracle";
  r.criterion = Criterion::Discrepancy;
  r.measured = worst;
  r.tolerance = tolerance;
  r.metadata = {{"n", n}, {"points", points}, {"seed", seed}, {"min_f_last", 1e-3}};
  if (!witness.empty()) r.witnesses.push_back(witness);
  r.decide();
  return r;
}

VerificationReport density_normalization_check(std::size_t n, std::size_t cells, double tolerance) {
  const auto q = normalization_constant(n, cells);
  const double closed = normalization_closed_form(n);
  VerificationReport r;
  r.check_name = "density_normalization";
  r.criterion = Criterion::Discrepancy;
  // Integral of the density is closed^-1 * quadrature.
  r.measured = std::abs(q.value / closed - 1.0);
  r.tolerance = tolerance;
  r.metadata = {{"n", n},
                {"cells", q.cells},
                {"quadrature_value", q.value},
                {"closed_form", closed},
                {"est_error", q.est_error},
                {"density_integral", q.value / closed}};
  r.decide();
  return r;
}

VerificationReport empirical_t1_law_check(std::size_t samples, std::size_t bins, std::uint64_t seed,
                                          double tolerance) {
  if (samples < 1 || bins < 1) fail(ErrorKind::Parameter, "samples and bins must be >= 1");
  const StreamFactory streams(seed, /*domain=*/0x7131);
  constexpr double lo = -1.0, hi = -0.5;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  std::size_t outside = 0;

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    auto eng = streams.stream(c);
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      const auto s = OrderedSample::from_unsorted(standard_normal_vector(eng, 3));
      const double t1 = forward(s).t[0];
      if (t1 < lo - 1e-12 || t1 > hi + 1e-12) {
        ++outside;
        continue;
      }
      const auto b = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, (t1 - lo) / width)));
      ++counts[b];
    }
  }

  const double total = static_cast<double>(samples);
  double sup_mass = 0.0, sup_density = 0.0;
  nlohmann::json histogram = nlohmann::json::array();
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + width * static_cast<double>(b);
    const double e = b + 1 == bins ? hi : a + width;
    const double exact_mass = 3.0 / std::numbers::pi * (std::asin(e) - std::asin(a));
    const double mass = static_cast<double>(counts[b]) / total;
    sup_mass = std::max(sup_mass, std::abs(mass - exact_mass));
    sup_density = std::max(sup_density, std::abs(mass - exact_mass) / width);
    histogram.push_back({{"lo", a}, {"hi", e}, {"count", counts[b]}, {"mass", mass}, {"exact_mass", exact_mass}});
  }

  VerificationReport r;
  r.check_name = "empirical_t1_law";
  r.criterion = Criterion::Discrepancy;
  r.measured = sup_mass;
  r.tolerance = tolerance;
  r.metadata = {{"n", 3},
                {"samples", samples},
                {"bins", bins},
                {"seed", seed},
                {"outside_support", outside},
                {"sup_density_deviation", sup_density},
                {"histogram", histogram}};
  r.decide();
  r.require(outside == 0, "draws of T_1 fell outside [-1, -1/2]");
  return r;
}

}  // namespace fdstat
