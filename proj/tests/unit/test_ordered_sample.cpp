#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fdstat/error.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/random.hpp"
#include "oracles.hpp"

using namespace fdstat;

namespace {

OrderedSample make(std::vector<double> v) { return OrderedSample::from_unsorted(v); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(OrderedSample, SortsAndComputesMoments) {
  const auto s = make({1, 4, 2});
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()), (std::vector<double>{1, 2, 4}));
  EXPECT_NEAR(s.mean(), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.sd(), std::sqrt(7.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.sd(), 1.52753, 1e-5);
}

TEST(OrderedSample, ConstantSampleHasZeroSd) {
  const auto s = make({5, 5, 5});
  EXPECT_EQ(s.mean(), 5.0);
  EXPECT_EQ(s.sd(), 0.0);
}

TEST(OrderedSample, TwoPoints) {
  const auto s = make({0, 1});
  EXPECT_EQ(s.mean(), 0.5);
  EXPECT_NEAR(s.sd(), std::sqrt(0.5), 1e-16);
}

TEST(OrderedSample, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { make({1.0}); }), ErrorKind::Size);
  EXPECT_EQ(kind_of([] { make({}); }), ErrorKind::Size);
  EXPECT_EQ(kind_of([] { make({1.0, std::nan("")}); }), ErrorKind::Input);
  EXPECT_EQ(kind_of([] { make({1.0, std::numeric_limits<double>::infinity()}); }), ErrorKind::Input);
}

TEST(OrderedSample, MomentsMatchOracleOnLargeMagnitudes) {
  Engine eng(7);
  for (int k = 0; k < 200; ++k) {
    auto v = standard_normal_vector(eng, 3 + k % 17);
    for (auto& x : v) x = 1e8 + x;
    const auto s = OrderedSample::from_unsorted(v);
    EXPECT_NEAR(s.mean(), static_cast<double>(oracle::mean(v)), 1e-7);
    EXPECT_NEAR(s.sd() / static_cast<double>(oracle::sd(v)), 1.0, 1e-8);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1], s[i]);
  }
}

TEST(Studentize, SymmetricSampleIsItsOwnProfile) {
  const auto p = studentize(make({-1, 0, 1}));
  EXPECT_NEAR(p.lambdas[0], -1.0, 1e-15);
  EXPECT_NEAR(p.lambdas[1], 0.0, 1e-15);
  EXPECT_NEAR(p.lambdas[2], 1.0, 1e-15);
}

TEST(Studentize, SkewedSample) {
  const auto p = studentize(make({1, 2, 4}));
  const double s = std::sqrt(7.0 / 3.0);
  EXPECT_NEAR(p.lambdas[0], -4.0 / 3.0 / s, 1e-15);
  EXPECT_NEAR(p.lambdas[1], -1.0 / 3.0 / s, 1e-15);
  EXPECT_NEAR(p.lambdas[2], 5.0 / 3.0 / s, 1e-15);
  EXPECT_NEAR(p.lambdas[0], -0.87287, 1e-5);
  EXPECT_NEAR(p.lambdas[1], -0.21822, 1e-5);
  EXPECT_NEAR(p.lambdas[2], 1.09109, 1e-5);
}

TEST(Studentize, Errors) {
  EXPECT_EQ(kind_of([] { studentize(make({2, 2, 2})); }), ErrorKind::Degeneracy);
  EXPECT_EQ(kind_of([] { studentize(make({0, 1})); }), ErrorKind::Size);
}

TEST(Studentize, ProfileLiesOnTheOrderedSphere) {
  const StreamFactory streams(11);
  for (std::size_t k = 0; k < 2000; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 3 + k % 15;
    auto v = standard_normal_vector(eng, n);
    for (auto& x : v) x = 50.0 + 1e3 * x;
    const auto p = studentize(OrderedSample::from_unsorted(v));
    long double sum = 0, sq = 0;
    for (double l : p.lambdas) {
      sum += l;
      sq += static_cast<long double>(l) * l;
    }
    EXPECT_LE(std::fabs(static_cast<double>(sum)), 1e-10 * static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(sq) / static_cast<double>(n - 1), 1.0, 1e-10);
    EXPECT_TRUE(std::is_sorted(p.lambdas.begin(), p.lambdas.end()));
  }
}

TEST(Gini, Examples) {
  EXPECT_NEAR(gini_mean_difference(make({1, 2, 4})), 2.0, 1e-15);
  EXPECT_EQ(gini_mean_difference(make({3, 3, 3, 3})), 0.0);
  EXPECT_NEAR(gini_mean_difference(make({0, 1})), 1.0, 1e-16);
  EXPECT_NEAR(gini_mean_difference_pairwise(std::vector<double>{1, 2, 4}), 2.0, 1e-15);
}

TEST(Gini, OrderedFormMatchesDoubleSum) {
  const StreamFactory streams(3);
  double worst = 0.0;
  for (std::size_t k = 0; k < 100000; ++k) {
    auto eng = streams.stream(k);
    const std::size_t n = 2 + k % 19;
    const auto v = standard_normal_vector(eng, n);
    const double fast = gini_mean_difference(OrderedSample::from_unsorted(v));
    const double ref = static_cast<double>(oracle::gini(v));
    worst = std::max(worst, std::abs(fast - ref) / ref);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Range, Examples) {
  EXPECT_EQ(sample_range(make({-1, 0, 1})), 2.0);
  EXPECT_EQ(sample_range(make({1, 2, 4})), 3.0);
  const auto two = make({0, 1});
  EXPECT_EQ(sample_range(two), 1.0);
  EXPECT_NEAR(two.sd() * two.sd(), 0.5 * sample_range(two) * sample_range(two), 1e-15);
}

TEST(LocationScale, StatisticsAreEquivariant) {
  const StreamFactory streams(5);
  for (std::size_t k = 0; k < 500; ++k) {
    auto eng = streams.stream(k);
    const auto v = standard_normal_vector(eng, 3 + k % 8);
    const double a = 0.1 + 10.0 * uniform01(eng);
    const double b = 20.0 * (uniform01(eng) - 0.5);
    std::vector<double> w(v);
    for (auto& x : w) x = a * x + b;
    const auto s = OrderedSample::from_unsorted(v), t = OrderedSample::from_unsorted(w);
    EXPECT_NEAR(gini_mean_difference(t), a * gini_mean_difference(s), 1e-12 * a * gini_mean_difference(s));
    EXPECT_NEAR(sample_range(t), a * sample_range(s), 1e-12 * a * sample_range(s));
    const auto ps = studentize(s), pt = studentize(t);
    for (std::size_t i = 0; i < ps.n(); ++i) EXPECT_NEAR(ps.lambdas[i], pt.lambdas[i], 1e-11);
  }
}

TEST(PairwiseSquareIdentity, Examples) {
  const auto r = pairwise_square_identity_check(std::vector<double>{1, 2, 4});
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.metadata["centered_sum_squares"].get<double>(), 42.0 / 9.0, 1e-14);
  EXPECT_NEAR(r.metadata["half_double_sum"].get<double>(), 42.0 / 9.0, 1e-14);
  EXPECT_NEAR(r.metadata["upper_pair_sum"].get<double>(), 42.0 / 9.0, 1e-14);

  const auto c = pairwise_square_identity_check(std::vector<double>{3, 3, 3});
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.metadata["centered_sum_squares"].get<double>(), 0.0);

  const auto two = pairwise_square_identity_check(std::vector<double>{0, 1});
  EXPECT_TRUE(two.passed);
  EXPECT_NEAR(two.metadata["upper_pair_sum"].get<double>(), 0.5, 1e-16);
}

TEST(PairwiseSquareIdentity, HoldsOnRandomInputs) {
  const StreamFactory streams(9);
  for (std::size_t k = 0; k < 2000; ++k) {
    auto eng = streams.stream(k);
    auto v = standard_normal_vector(eng, 2 + k % 30);
    for (auto& x : v) x *= std::exp(3.0 * standard_normal(eng));
    EXPECT_TRUE(pairwise_square_identity_check(v).passed);
  }
}
