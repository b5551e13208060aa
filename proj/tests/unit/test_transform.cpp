#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "fdstat/error.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/quadrature.hpp"
#include "fdstat/random.hpp"
#include "fdstat/transform.hpp"

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

// Reference inverse map written directly from the coordinate definitions.
Eigen::VectorXd reference_inverse(const Eigen::VectorXd& v) {
  const long n = v.size();
  const double w1 = v[n - 2], w2 = v[n - 1];
  Eigen::VectorXd y(n);
  double f = 1.0;
  for (long i = 0; i < n - 2; ++i) {
    const double r = static_cast<double>(n - i - 1);  // n - i in 1-based terms
    double prior = 0.0;
    for (long k = 0; k < i; ++k) {
      const double rk = static_cast<double>(n - k - 1);
      prior += v[k] / std::sqrt(rk * (rk + 1.0));
    }
    y[i] = std::sqrt(r / (r + 1.0)) * v[i] - prior;
    f -= v[i] * v[i];
  }
  double prior = 0.0;
  for (long k = 0; k < n - 2; ++k) {
    const double rk = static_cast<double>(n - k - 1);
    prior += v[k] / std::sqrt(rk * (rk + 1.0));
  }
  y[n - 2] = -prior - std::sqrt(f / 2.0);
  y[n - 1] = -prior + std::sqrt(f / 2.0);
  return Eigen::VectorXd::Constant(n, w1) + w2 * std::sqrt(static_cast<double>(n - 1)) * y;
}

}  // namespace

TEST(Forward, SymmetricThreePoint) {
  const auto c = forward(OrderedSample::from_unsorted(std::vector<double>{-1, 0, 1}));
  ASSERT_EQ(c.t.size(), 1u);
  EXPECT_NEAR(c.t[0], -std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(c.w1, 0.0, 1e-16);
  EXPECT_NEAR(c.w2, 1.0, 1e-15);
  EXPECT_NEAR(c.f[0], 0.25, 1e-15);
  EXPECT_FALSE(c.has_ties);
}

TEST(Forward, FirstCoordinateStaysInItsInterval) {
  const StreamFactory streams(1);
  for (std::size_t k = 0; k < 10000; ++k) {
    auto eng = streams.stream(k);
    const auto c = forward(OrderedSample::from_unsorted(standard_normal_vector(eng, 3)));
    EXPECT_GE(c.t[0], -1.0 - 1e-15);
    EXPECT_LE(c.t[0], -0.5 + 1e-15);
  }
}

TEST(Forward, OutputIsAlwaysInTheRegion) {
  const StreamFactory streams(2);
  for (std::size_t k = 0; k < 20000; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 3 + k % 10;
    const auto c = forward(OrderedSample::from_unsorted(standard_normal_vector(eng, n)));
    EXPECT_TRUE(region_membership(c.t, n)) << "n=" << n;
    for (std::size_t i = 1; i < c.f.size(); ++i) EXPECT_LE(c.f[i], c.f[i - 1] + 1e-15);
  }
}

TEST(Forward, TiesAreFlaggedAndOnTheBoundary) {
  const auto c = forward(OrderedSample::from_unsorted(std::vector<double>{0, 1, 1}));
  EXPECT_TRUE(c.has_ties);
  EXPECT_NEAR(c.f.back(), 0.0, 1e-15);
  EXPECT_TRUE(region_membership(c.t, 3));
}

TEST(Forward, Errors) {
  EXPECT_EQ(kind_of([] { forward(OrderedSample::from_unsorted(std::vector<double>{2, 2, 2})); }), ErrorKind::Degeneracy);
  EXPECT_EQ(kind_of([] { forward(OrderedSample::from_unsorted(std::vector<double>{0, 1})); }), ErrorKind::Size);
}

TEST(RoundTrip, Example) {
  const auto s = OrderedSample::from_unsorted(std::vector<double>{0, 0.5, 2.5});
  const auto back = inverse(forward(s), 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], s[i], 1e-12);
}

TEST(RoundTrip, RandomSamples) {
  const StreamFactory streams(3);
  for (std::size_t n = 3; n <= 10; ++n) {
    double worst = 0.0;
    for (std::size_t k = 0; k < 2000; ++k) {
      auto eng = streams.stream(100000 * n + k);
      auto v = standard_normal_vector(eng, n);
      const double scale = std::exp(3.0 * standard_normal(eng));
      for (auto& x : v) x = 5.0 + scale * x;
      const auto s = OrderedSample::from_unsorted(v);
      const auto back = inverse(forward(s), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag = std::max(mag, std::abs(s[i]));
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(back[i] - s[i]) / mag);
    }
    EXPECT_LT(worst, 1e-10) << "n=" << n;
  }
}

TEST(Inverse, Examples) {
  const auto x = inverse(TransformCoords::from_t({-std::sqrt(3.0) / 2.0}, 0.0, 1.0), 3);
  EXPECT_NEAR(x[0], -1.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
  EXPECT_NEAR(x[2], 1.0, 1e-15);

  const auto tie = inverse(TransformCoords::from_t({-1.0}, 0.0, 1.0), 3);
  EXPECT_EQ(tie[1], tie[2]);

  const auto base = inverse(TransformCoords::from_t({-0.7}, 0.0, 1.0), 3);
  const auto shifted = inverse(TransformCoords::from_t({-0.7}, 5.0, 1.0), 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(shifted[i], base[i] + 5.0, 1e-14);
}

TEST(Inverse, Errors) {
  EXPECT_EQ(kind_of([] { inverse(TransformCoords::from_t({-1.2}, 0.0, 1.0), 3); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { inverse(TransformCoords::from_t({-0.3}, 0.0, 1.0), 3); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { inverse(TransformCoords::from_t({-0.7}, 0.0, 0.0), 3); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { inverse(TransformCoords::from_t({-0.7}, 0.0, 1.0), 4); }), ErrorKind::Size);
}

TEST(InverseMap, MatchesReferenceFormula) {
  const StreamFactory streams(4);
  for (std::size_t k = 0; k < 500; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 3 + k % 8;
    const auto c = forward(OrderedSample::from_unsorted(standard_normal_vector(eng, n)));
    Eigen::VectorXd v(n);
    for (std::size_t i = 0; i < n - 2; ++i) v[static_cast<long>(i)] = c.t[i];
    v[static_cast<long>(n) - 2] = 1.5;
    v[static_cast<long>(n) - 1] = 0.7;
    const auto ref = reference_inverse(v);
    const auto x = inverse_map(c.t, 1.5, 0.7);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[static_cast<long>(i)], 1e-12);
  }
}

TEST(Jacobian, ClosedFormExamples) {
  const auto c = TransformCoords::from_t({-std::sqrt(3.0) / 2.0}, 0.0, 1.0);
  EXPECT_NEAR(jacobian_abs(c, 3), 4.0 * std::sqrt(3.0), 1e-13);
  EXPECT_NEAR(jacobian_abs(TransformCoords::from_t({-std::sqrt(3.0) / 2.0}, 0.0, 2.0), 3), 8.0 * std::sqrt(3.0), 1e-13);
  EXPECT_EQ(kind_of([] { jacobian_abs(TransformCoords::from_t({-1.0}, 0.0, 1.0), 3); }), ErrorKind::Singularity);
}

TEST(Jacobian, MatchesFiniteDifferenceDeterminant) {
  const StreamFactory streams(5);
  std::size_t checked = 0;
  for (std::size_t k = 0; checked < 1000; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 3 + k % 6;
    const auto c = forward(OrderedSample::from_unsorted(standard_normal_vector(eng, n)));
    if (c.f.back() < 1e-3) continue;
    ++checked;
    const long m = static_cast<long>(n);
    Eigen::VectorXd v(m);
    for (long i = 0; i < m - 2; ++i) v[i] = c.t[static_cast<std::size_t>(i)];
    v[m - 2] = standard_normal(eng);
    v[m - 1] = 0.5 + uniform01(eng);
    Eigen::MatrixXd jac(m, m);
    for (long j = 0; j < m; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(v[j]));
      Eigen::VectorXd plus = v, minus = v;
      plus[j] += h;
      minus[j] -= h;
      jac.col(j) = (reference_inverse(plus) - reference_inverse(minus)) / (2.0 * h);
    }
    const double numeric = std::abs(jac.fullPivLu().determinant());
    const double closed = jacobian_abs(TransformCoords::from_t(c.t, v[m - 2], v[m - 1]), n);
    EXPECT_NEAR(numeric / closed, 1.0, 1e-5) << "n=" << n;
  }
}

TEST(Density, ThreePointArcsineLaw) {
  EXPECT_NEAR(studentized_density(std::vector<double>{-0.8}, 3), 3.0 / (0.6 * std::numbers::pi), 1e-14);
  EXPECT_NEAR(studentized_density(std::vector<double>{-0.8}, 3), 1.59155, 1e-5);
  EXPECT_EQ(studentized_density(std::vector<double>{-0.3}, 3), 0.0);
  EXPECT_EQ(kind_of([] { studentized_density(std::vector<double>{-1.0}, 3); }), ErrorKind::Singularity);
  // Integral of the arcsine density over [-1, -1/2] in closed form.
  EXPECT_NEAR(3.0 / std::numbers::pi * (std::asin(-0.5) - std::asin(-1.0)), 1.0, 1e-15);
}

TEST(Region, Membership) {
  EXPECT_TRUE(region_membership(std::vector<double>{-0.75}, 3));
  EXPECT_TRUE(region_membership(std::vector<double>{-0.5}, 3));
  EXPECT_TRUE(region_membership(std::vector<double>{-1.0}, 3));
  EXPECT_FALSE(region_membership(std::vector<double>{-0.49}, 3));
  EXPECT_FALSE(region_membership(std::vector<double>{-1.01}, 3));
  EXPECT_EQ(kind_of([] { region_membership(std::vector<double>{-0.7}, 4); }), ErrorKind::Size);
}

TEST(Normalization, ClosedForm) {
  EXPECT_NEAR(normalization_closed_form(3), std::numbers::pi / 3.0, 1e-15);
  EXPECT_NEAR(normalization_closed_form(4), std::numbers::pi / 6.0, 1e-15);
  EXPECT_NEAR(normalization_closed_form(5), std::numbers::pi * std::numbers::pi / 60.0, 1e-15);
}

TEST(Normalization, Quadrature) {
  EXPECT_NEAR(normalization_constant(3, 4).value, std::numbers::pi / 3.0, 1e-6);
  EXPECT_NEAR(normalization_constant(4, 8).value, std::numbers::pi / 6.0, 1e-4);
  EXPECT_NEAR(normalization_constant(5, 8).value / normalization_closed_form(5), 1.0, 1e-3);
}

TEST(Normalization, CoarseGridStillClose) {
  const auto q = normalization_constant(3, 1);
  EXPECT_NEAR(q.value, std::numbers::pi / 3.0, 1e-3);
  EXPECT_EQ(q.cells, 1u);
  EXPECT_GE(q.est_error, 0.0);
}

TEST(Normalization, ConvergesWithCells) {
  const double exact = normalization_closed_form(5);
  double previous = INFINITY;
  for (std::size_t cells : {1u, 2u, 4u}) {
    const double err = std::abs(normalization_constant(5, cells).value - exact);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_EQ(kind_of([] { normalization_constant(9, 1); }), ErrorKind::Parameter);
}

TEST(Quadrature, IntegratesPolynomialMoment) {
  // Mean of t_1 under the n=3 density: (3/pi) * integral of t / sqrt(1 - t^2) over [-1, -1/2].
  const double exact = 3.0 / std::numbers::pi * (-std::sqrt(0.75));
  const double got = integrate_over_region_fixed(3, 4, [](std::span<const double> t, double) { return t[0]; }) /
                     normalization_closed_form(3);
  EXPECT_NEAR(got, exact, 1e-12);
}
