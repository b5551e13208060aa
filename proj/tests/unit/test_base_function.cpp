#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdstat/base_function.hpp"
#include "fdstat/error.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/random.hpp"
#include "fdstat/suites.hpp"
#include "oracles.hpp"

using namespace fdstat;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

const std::vector<double> kSymmetric{-1, 0, 1};

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

TEST(Evaluate, VariancePresetOnSymmetricPoint) {
  EXPECT_NEAR(evaluate(BaseFunction::variance(3), kSymmetric), 1.0, 1e-15);
}

TEST(Evaluate, LinearGivesRangeOfPoint) {
  EXPECT_NEAR(evaluate(BaseFunction::linear({-1, 0, 1}), kSymmetric), 2.0, 1e-15);
}

TEST(Evaluate, EveryFamilyVanishesAtOrigin) {
  const std::vector<double> zero(4, 0.0);
  for (const auto& u : catalog(4)) EXPECT_EQ(evaluate(u, zero), 0.0) << u.label();
}

TEST(Evaluate, RejectsPointsOutsideTheOrderedSet) {
  const auto u = BaseFunction::gini(3);
  EXPECT_EQ(kind_of([&] { evaluate(u, std::vector<double>{1, 0, -1}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { evaluate(u, std::vector<double>{-1, 0, 2}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { evaluate(u, std::vector<double>{-1, 1}); }), ErrorKind::Size);
}

TEST(Statistic, PresetsReproduceClassicalStatistics) {
  const auto s = OrderedSample::from_unsorted(std::vector<double>{1, 2, 4});
  EXPECT_NEAR(statistic(BaseFunction::gini(3), s), 2.0, 1e-15);
  EXPECT_NEAR(statistic(BaseFunction::range(3), s), 3.0, 1e-15);
  EXPECT_NEAR(statistic(BaseFunction::variance(3), s), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(statistic(BaseFunction::sample_sd(3), s), std::sqrt(7.0 / 3.0), 1e-15);
  EXPECT_NEAR(statistic(BaseFunction::standard_error(3), s), std::sqrt(7.0 / 9.0), 1e-15);
  EXPECT_EQ(kind_of([&] { statistic(BaseFunction::gini(4), s); }), ErrorKind::Size);
}

TEST(Statistic, FactorsThroughTheStudentizedProfile) {
  const StreamFactory streams(21);
  for (std::size_t n : {3u, 5u, 8u}) {
    for (const auto& u : catalog(n)) {
      for (std::size_t k = 0; k < 50; ++k) {
        auto eng = streams.stream(1000 * n + k);
        auto v = standard_normal_vector(eng, n);
        for (auto& x : v) x = 3.0 + 7.0 * x;
        const auto s = OrderedSample::from_unsorted(v);
        const double direct = statistic(u, s);
        const double factored = std::pow(s.sd(), u.effective_degree()) * evaluate(u, studentize(s).lambdas);
        EXPECT_NEAR(direct / factored, 1.0, 1e-10) << u.label();
      }
    }
  }
}

TEST(Constructors, QuadraticFormRequiresPositiveDefinite) {
  EXPECT_EQ(kind_of([] { BaseFunction::quadratic_form(2, {1, 2, 2, 1}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { BaseFunction::quadratic_form(2, {1, 0, 0, 0}); }), ErrorKind::Parameter);
  EXPECT_NO_THROW(BaseFunction::quadratic_form(2, {2, -1, -1, 2}));
}

TEST(Constructors, StructuralErrors) {
  EXPECT_EQ(kind_of([] { BaseFunction::power_sum(0.0, ones(3)); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { BaseFunction::pairwise_power(1.0, 3, ones(4)); }), ErrorKind::Size);
  EXPECT_EQ(kind_of([] { BaseFunction::linear({1.0, std::nan("")}); }), ErrorKind::Parameter);
}

TEST(Constructors, RootNormalizationHasDegreeOne) {
  const auto u = BaseFunction::power_sum(3.0, ones(4)).root_normalized();
  EXPECT_EQ(u.effective_degree(), 1.0);
  EXPECT_EQ(u.degree(), 3.0);
  const std::vector<double> p{-2, -1, 1, 2};
  EXPECT_NEAR(u(p), std::cbrt(18.0), 1e-14);
}

TEST(Feasibility, GiniPasses) {
  const auto r = check_feasibility(BaseFunction::gini(5), 5, 10000, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.metadata["min_u"].get<double>(), 0.0);
}

TEST(Feasibility, EqualLinearCoefficientsFailDefiniteness) {
  const auto r = check_feasibility(BaseFunction::linear(ones(4)), 4, 1000, 1);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.metadata["failed_conditions"].empty());
  EXPECT_FALSE(BaseFunction::linear(ones(4)).sufficient_condition_warnings().empty());
}

TEST(Feasibility, PowerSumWithZeroLeadingCoefficientPassesWithWarning) {
  const auto u = BaseFunction::power_sum(1.0, {0.0, 1.0, 1.0});
  const auto r = check_feasibility(u, 3, 1000, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.metadata["min_u"].get<double>(), 0.0);
  EXPECT_FALSE(r.metadata["warnings"].empty());
}

TEST(Feasibility, CatalogIsHomogeneous) {
  for (std::size_t n : {3u, 4u, 6u, 9u}) {
    for (const auto& u : catalog(n)) EXPECT_TRUE(check_feasibility(u, n, 1000, 3).passed) << u.label() << " n=" << n;
  }
}

TEST(Feasibility, LinearFormsDominateTheOrderCorrelationBound) {
  const StreamFactory streams(4);
  for (std::size_t k = 0; k < 2000; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 3 + k % 8;
    auto a = standard_normal_vector(eng, n);
    std::sort(a.begin(), a.end());
    const auto lambda = uniform_point_on_ordered_sphere(eng, n);
    const double abar = static_cast<double>(oracle::mean(a));
    double dev = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dev += (a[i] - abar) * (a[i] - abar);
      norm += lambda[i] * lambda[i];
    }
    const double bound = std::sqrt(dev) * std::sqrt(norm) / (static_cast<double>(n) - 1.0);
    EXPECT_GE(BaseFunction::linear(a)(lambda), bound * (1.0 - 1e-12));
  }
}

TEST(Bounds, RangeUpperBoundIsSharpAndLowerBoundMatchesTwoValuedOracle) {
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto b = estimate_bounds(BaseFunction::range(n), n, 20000, 5);
    const double upper = std::sqrt(2.0 * (static_cast<double>(n) - 1.0));
    EXPECT_NEAR(b.upper, upper, 1e-3) << "n=" << n;
    EXPECT_NEAR(b.lower, oracle::min_range_ratio(n), 1e-3) << "n=" << n;
    EXPECT_GE(b.lower, std::numbers::sqrt2 - 1e-12);
    // The maximiser is the symmetric witness (-1, 0, ..., 0, 1) on the sphere.
    const double end = std::sqrt((static_cast<double>(n) - 1.0) / 2.0);
    EXPECT_NEAR(b.argmax.front(), -end, 1e-2);
    EXPECT_NEAR(b.argmax.back(), end, 1e-2);
  }
}

TEST(Bounds, ThreePointRangeLowerBound) {
  // The infimum over non-constant 3-samples is sqrt(3), above sqrt(2).
  const auto b = estimate_bounds(BaseFunction::range(3), 3, 5000, 1);
  EXPECT_NEAR(b.lower, std::sqrt(3.0), 1e-3);
  EXPECT_NEAR(b.upper, 2.0, 1e-3);
}

TEST(Bounds, GiniWithinItsBounds) {
  const auto b = estimate_bounds(BaseFunction::gini(3), 3, 5000, 1);
  EXPECT_LE(b.upper, 2.0 + 1e-12);
  EXPECT_GE(b.lower, 2.0 * std::numbers::sqrt2 / 6.0);
}

TEST(Bounds, SampleSdIsConstantOnTheSphere) {
  const auto b = estimate_bounds(BaseFunction::sample_sd(5), 5, 2000, 1);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
}

TEST(Bounds, Errors) {
  EXPECT_EQ(kind_of([] { estimate_bounds(BaseFunction::range(3), 3, 0, 1); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { estimate_bounds(BaseFunction::variance(3), 3, 10, 1); }), ErrorKind::Parameter);
}

TEST(Json, RoundTripIsBitExact) {
  for (const auto& u : catalog(5)) {
    if (u.family() == Family::Custom) {
      EXPECT_EQ(kind_of([&] { to_json(u); }), ErrorKind::Parameter);
      continue;
    }
    const auto text = to_json(u).dump();
    const auto back = base_function_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.family(), u.family());
    EXPECT_EQ(back.coefficients(), u.coefficients());
    EXPECT_EQ(back.degree(), u.degree());
    EXPECT_EQ(back.is_root_normalized(), u.is_root_normalized());
    EXPECT_EQ(back.label(), u.label());
    EXPECT_EQ(to_json(back).dump(), text);
  }
}

TEST(Json, MalformedDescriptors) {
  using nlohmann::json;
  EXPECT_EQ(kind_of([] { base_function_from_json(json{{"family", "Linear"}}); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { base_function_from_json(json{{"family", "Nope"}, {"n", 3}, {"degree", 1}, {"coefficients", {1}}}); }),
            ErrorKind::Parse);
  EXPECT_EQ(kind_of([] {
              base_function_from_json(json{{"family", "Linear"}, {"n", 3}, {"degree", 1}, {"coefficients", {1, 2}}});
            }),
            ErrorKind::Parse);
}

TEST(Presets, ByName) {
  EXPECT_EQ(BaseFunction::preset("gini", 4).label(), "gini");
  EXPECT_EQ(BaseFunction::preset("sd", 4).effective_degree(), 1.0);
  EXPECT_EQ(kind_of([] { BaseFunction::preset("median", 4); }), ErrorKind::Parameter);
}
