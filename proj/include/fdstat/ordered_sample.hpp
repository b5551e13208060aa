#pragma once

#include <span>
#include <vector>

#include "fdstat/report.hpp"

namespace fdstat {

/// A sample sorted ascending, with its mean and sample standard deviation
/// (divisor n-1) computed once at construction.
class OrderedSample {
 public:
  /// Sorts a copy of `raw`. Throws ErrorKind::Size for n < 2 and
  /// ErrorKind::Input for non-finite entries.
  static OrderedSample from_unsorted(std::span<const double> raw);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  /// Ordered deviations x_(i) - mean.
  std::vector<double> centered() const;

 private:
  OrderedSample(std::vector<double> sorted, double mean, double sd)
      : values_(std::move(sorted)), mean_(mean), sd_(sd) {}

  std::vector<double> values_;
  double mean_;
  double sd_;
};

inline OrderedSample make_ordered(std::span<const double> raw) { return OrderedSample::from_unsorted(raw); }

/// Lambda_i = (x_(i) - mean) / sd. Lies in the ordered set A_n:
/// sorted, zero sum, squared norm n-1.
struct StudentizedProfile {
  std::vector<double> lambdas;
  std::size_t n() const noexcept { return lambdas.size(); }
};

/// Throws ErrorKind::Size for n < 3 and ErrorKind::Degeneracy when sd == 0.
StudentizedProfile studentize(const OrderedSample& s);

/// Gini mean difference via the O(n) ordered linear form
/// (4 / (n(n-1))) * sum_i (i - (n+1)/2) x_(i).
double gini_mean_difference(const OrderedSample& s);

/// Same quantity by the O(n^2) definition (1/(n(n-1))) sum_i sum_j |x_i - x_j|.
double gini_mean_difference_pairwise(std::span<const double> x);

double sample_range(const OrderedSample& s) noexcept;

/// Checks sum (x_i - mean)^2 = (1/(2n)) sum_i sum_j (x_i - x_j)^2 = (1/n) sum_{i<j} (x_i - x_j)^2.
VerificationReport pairwise_square_identity_check(std::span<const double> raw, double tolerance = 1e-10);

}  // namespace fdstat
