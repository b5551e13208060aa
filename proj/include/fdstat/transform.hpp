#pragma once

#include <span>
#include <vector>

#include "fdstat/ordered_sample.hpp"

namespace fdstat {

/// Image (t_1..t_{n-2}, w1, w2) of an ordered sample under the studentized
/// order-statistics transform, plus f_i = 1 - sum_{k<=i} t_k^2.
struct TransformCoords {
  std::vector<double> t;
  double w1 = 0.0;  // sample mean
  double w2 = 1.0;  // sample SD
  std::vector<double> f;
  bool has_ties = false;  // sample had coincident values; t sits on the region boundary

  std::size_t n() const noexcept { return t.size() + 2; }

  /// Builds coordinates from t alone, with f computed as 1 - cumulative sum of squares.
  static TransformCoords from_t(std::vector<double> t, double w1, double w2);
};

/// Throws ErrorKind::Size for n < 3, ErrorKind::Degeneracy when sd == 0.
TransformCoords forward(const OrderedSample& s);

/// Reconstructs the ordered sample. Throws ErrorKind::Domain when
/// f_{n-2} < 0, when t is outside B_{n-2}, or when w2 <= 0.
OrderedSample inverse(const TransformCoords& c, std::size_t n);

/// The raw inverse formula without region checks: returns x_(1..n) for the
/// given t, w1, w2. Throws ErrorKind::Domain only when f_{n-2} < 0.
std::vector<double> inverse_map(std::span<const double> t, double w1, double w2);

/// As above with f_{n-2} supplied by the caller (e.g. from an angular
/// parametrisation where it is known more accurately than 1 - sum t^2).
std::vector<double> inverse_map(std::span<const double> t, double f_last, double w1, double w2);

/// |J| = sqrt(n) (n-1)^((n-1)/2) w2^(n-2) f_{n-2}^(-1/2).
/// Throws ErrorKind::Singularity when f_{n-2} <= 0.
double jacobian_abs(const TransformCoords& c, std::size_t n);

/// Joint density of (T_1..T_{n-2}) for a normal parent:
/// n! Gamma((n-1)/2) / (2 pi^((n-1)/2) f_{n-2}^(1/2)) on B_{n-2}, 0 outside.
double studentized_density(std::span<const double> t, std::size_t n);

/// Membership in the closed region B_{n-2}. `slack` absorbs rounding in
/// coordinates produced by forward().
bool region_membership(std::span<const double> t, std::size_t n, double slack = 1e-12);

/// 2 pi^((n-1)/2) / (n! Gamma((n-1)/2)) = integral of f_{n-2}^(-1/2) over B_{n-2}.
double normalization_closed_form(std::size_t n);

}  // namespace fdstat
