#include "fdstat/ordered_sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdstat/error.hpp"
#include "fdstat/summation.hpp"

namespace fdstat {

OrderedSample OrderedSample::from_unsorted(std::span<const double> raw) {
  if (raw.size() < 2) fail(ErrorKind::Size, "a sample needs at least 2 values, got " + std::to_string(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) fail(ErrorKind::Input, "non-finite value at position " + std::to_string(i));
  }
  std::vector<double> v(raw.begin(), raw.end());
  std::sort(v.begin(), v.end());

  const double n = static_cast<double>(v.size());
  const double mean = compensated_sum(v) / n;
  CompensatedSum ss;
  for (double x : v) ss.add((x - mean) * (x - mean));
  const double sd = std::sqrt(ss.value() / (n - 1.0));
  return OrderedSample(std::move(v), mean, sd);
}

std::vector<double> OrderedSample::centered() const {
  std::vector<double> d(values_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = values_[i] - mean_;
  return d;
}

StudentizedProfile studentize(const OrderedSample& s) {
  if (s.size() < 3) fail(ErrorKind::Size, "studentization needs n >= 3, got " + std::to_string(s.size()));
  if (!(s.sd() > 0.0)) fail(ErrorKind::Degeneracy, "constant sample has no studentized profile");
  StudentizedProfile p;
  p.lambdas.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) p.lambdas[i] = (s[i] - s.mean()) / s.sd();
  return p;
}

double gini_mean_difference(const OrderedSample& s) {
  const std::size_t n = s.size();
  const double mid = (static_cast<double>(n) + 1.0) / 2.0;
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add((static_cast<double>(i + 1) - mid) * s[i]);
  const double nn = static_cast<double>(n);
  return 4.0 * acc.value() / (nn * (nn - 1.0));
}

double gini_mean_difference_pairwise(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::Size, "Gini mean difference needs n >= 2");
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) acc.add(std::abs(x[i] - x[j]));
  }
  const double nn = static_cast<double>(n);
  return acc.value() / (nn * (nn - 1.0));
}

double sample_range(const OrderedSample& s) noexcept { return s.max() - s.min(); }

VerificationReport pairwise_square_identity_check(std::span<const double> raw, double tolerance) {
  const auto s = OrderedSample::from_unsorted(raw);
  const std::size_t n = s.size();
  const double nn = static_cast<double>(n);

  CompensatedSum centered, full, upper;
  for (std::size_t i = 0; i < n; ++i) {
    centered.add((raw[i] - s.mean()) * (raw[i] - s.mean()));
    for (std::size_t j = 0; j < n; ++j) {
      const double d2 = (raw[i] - raw[j]) * (raw[i] - raw[j]);
      full.add(d2);
      if (i < j) upper.add(d2);
    }
  }
  const double lhs = centered.value();
  const double mid = full.value() / (2.0 * nn);
  const double right = upper.value() / nn;

  const double scale = std::max({std::abs(lhs), std::abs(mid), std::abs(right)});
  const double worst = std::max({std::abs(lhs - mid), std::abs(lhs - right), std::abs(mid - right)});

  VerificationReport r;
  r.check_name = "pairwise_square_identity";
  r.measured = scale > 0.0 ? worst / scale : worst;
  r.tolerance = tolerance;
  r.criterion = Criterion::Discrepancy;
  r.metadata = {{"n", n}, {"centered_sum_squares", lhs}, {"half_double_sum", mid}, {"upper_pair_sum", right}};
  r.witnesses.emplace_back(raw.begin(), raw.end());
  r.decide();
  return r;
}

}  // namespace fdstat
