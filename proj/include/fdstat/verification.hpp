#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdstat/base_function.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/report.hpp"

namespace fdstat {

/// Order correlation Cov(mu, lambda) / (s(mu) s(lambda)) with divisor-n
/// moments. Both inputs must be sorted ascending, of equal length n >= 2.
/// Throws ErrorKind::Degeneracy if either vector is constant.
double order_correlation_ratio(std::span<const double> mu, std::span<const double> lambda);

/// Which equality configuration, if any, a co-sorted pair matches:
/// n = 2; mu_2 = ... = mu_n with lambda_1 = ... = lambda_{n-1}; or the mirror.
enum class OrderCorrelationEquality { None, TwoPoints, LowerTail, UpperTail };
OrderCorrelationEquality order_correlation_equality_case(std::span<const double> mu, std::span<const double> lambda,
                                          double tolerance = 0.0);

/// sqrt(2) <= (x_(n) - x_(1)) / s_n <= sqrt(2(n-1)). `measured` is the
/// relative slack to the nearer bound.
VerificationReport range_inequality_check(const OrderedSample& s, double tolerance = 1e-12);

/// (a_1n + a_n1) sqrt(2)^p <= Z_n / S_n^p <= max_{i!=j} a_ij n(n-1) sqrt(2(n-1))^p
/// for a PairwisePower base function. When the coefficients are the Gini
/// configuration the Gini bounds are checked and recorded as well.
VerificationReport definite_ratio_bounds_check(const BaseFunction& u, const OrderedSample& s,
                                               double tolerance = 1e-12);

enum class ParentDensity { Normal, Laplace };
const char* to_string(ParentDensity d) noexcept;
double parent_density(ParentDensity d, double x) noexcept;

struct IntegroFunctionalConfig {
  ParentDensity density = ParentDensity::Normal;
  std::vector<double> xbar_grid{-1.0, 0.0, 1.5};
  std::vector<double> z_grid{0.0, 0.5, 2.0};
  std::size_t cells = 16;
  double tolerance = 1e-4;
};

/// Evaluates both sides of the integro-functional equation
///   int_B U^-(n-1) f^-1/2 prod_i f_X(xbar + z l_i / U) dt
///     = f_X(0)^-n f_X(xbar)^n int_B U^-(n-1) f^-1/2 prod_i f_X(z l_i / U) dt
/// at every grid pair, with l(t) the transform's inverse at (w1, w2) = (0, 1).
/// `measured` is the largest relative discrepancy. n must be 3 or 4 and U of
/// degree 1.
VerificationReport integro_functional_check(const BaseFunction& u, std::size_t n, const IntegroFunctionalConfig& config = {});

/// At random t in B_{n-2}: sigma_i = l_i / U(l) has sum 0 and squared norm (n-1) / U(l)^2.
VerificationReport sigma_conditions_check(const BaseFunction& u, std::size_t n, std::size_t trials,
                                          std::uint64_t seed);

// Transform-level checks used by the named suites.

/// inverse(forward(x)) == x on `samples` random normal samples of size n.
VerificationReport round_trip_check(std::size_t n, std::size_t samples, std::uint64_t seed, double tolerance = 1e-10);

/// Closed-form |J| against a central-difference determinant of the inverse
/// map at random interior points (f_{n-2} >= 1e-3).
VerificationReport jacobian_oracle_check(std::size_t n, std::size_t points, std::uint64_t seed,
                                         double tolerance = 1e-5);

/// Quadrature of f^-1/2 over B_{n-2} against the closed form.
VerificationReport density_normalization_check(std::size_t n, std::size_t cells, double tolerance);

/// Histogram of T_1 from `samples` normal samples of size 3 against the
/// arcsine law 3 / (pi sqrt(1 - t^2)) on [-1, -1/2]. `measured` is the sup
/// over bins of |empirical bin mass - exact bin mass|.
VerificationReport empirical_t1_law_check(std::size_t samples, std::size_t bins, std::uint64_t seed,
                                          double tolerance = 0.03);

}  // namespace fdstat
