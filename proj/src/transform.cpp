#include "fdstat/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fdstat/error.hpp"
#include "fdstat/summation.hpp"

namespace fdstat {

namespace {

void require_n(std::size_t n) {
  if (n < 3) fail(ErrorKind::Size, "the transform needs n >= 3, got " + std::to_string(n));
}

std::vector<double> cumulative_f(std::span<const double> t) {
  std::vector<double> f(t.size());
  CompensatedSum ss;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ss.add(t[i] * t[i]);
    f[i] = 1.0 - ss.value();
  }
  return f;
}

// y = (x - w1) / (w2 sqrt(n-1)); x = w1 + w2 sqrt(n-1) y.
std::vector<double> inverse_impl(std::span<const double> t, double f_last, double w1, double w2) {
  const std::size_t n = t.size() + 2;
  const double nn = static_cast<double>(n);
  std::vector<double> x(n);
  double tail = 0.0;  // sum_{k<i} t_k / sqrt((n-k)(n-k+1))
  for (std::size_t i = 1; i <= n - 2; ++i) {
    const double ni = nn - static_cast<double>(i);
    const double y = std::sqrt(ni / (ni + 1.0)) * t[i - 1] - tail;
    x[i - 1] = y;
    tail += t[i - 1] / std::sqrt(ni * (ni + 1.0));
  }
  const double half_gap = std::sqrt(f_last / 2.0);
  x[n - 2] = -tail - half_gap;
  x[n - 1] = -tail + half_gap;
  const double scale = w2 * std::sqrt(nn - 1.0);
  for (auto& v : x) v = w1 + scale * v;
  return x;
}

}  // namespace

TransformCoords TransformCoords::from_t(std::vector<double> t, double w1, double w2) {
  TransformCoords c;
  c.f = cumulative_f(t);
  c.t = std::move(t);
  c.w1 = w1;
  c.w2 = w2;
  return c;
}

TransformCoords forward(const OrderedSample& s) {
  const std::size_t n = s.size();
  require_n(n);
  if (!(s.sd() > 0.0)) fail(ErrorKind::Degeneracy, "constant sample: w2 = 0 is outside the transform range");

  const double nn = static_cast<double>(n);
  const double scale = s.sd() * std::sqrt(nn - 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (s[i] - s.mean()) / scale;

  // Suffix means m_i of y_i..y_n give t_i = sqrt((n-i+1)/(n-i)) (y_i - m_i)
  // and f_i = sum_{j>i} (y_j - m_{i+1})^2 without cancellation.
  std::vector<double> suffix_mean(n + 1, 0.0);
  {
    CompensatedSum acc;
    for (std::size_t j = n; j-- > 0;) {
      acc.add(y[j]);
      suffix_mean[j] = acc.value() / static_cast<double>(n - j);
    }
  }

  TransformCoords c;
  c.w1 = s.mean();
  c.w2 = s.sd();
  c.t.resize(n - 2);
  c.f.resize(n - 2);
  for (std::size_t i = 0; i < n - 2; ++i) {
    const double remaining = static_cast<double>(n - i);  // n - i + 1 in 1-based terms
    c.t[i] = std::sqrt(remaining / (remaining - 1.0)) * (y[i] - suffix_mean[i]);
    CompensatedSum ss;
    for (std::size_t j = i + 1; j < n; ++j) ss.add((y[j] - suffix_mean[i + 1]) * (y[j] - suffix_mean[i + 1]));
    c.f[i] = ss.value();
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (s[i] == s[i + 1]) c.has_ties = true;
  }
  return c;
}

std::vector<double> inverse_map(std::span<const double> t, double w1, double w2) {
  if (t.empty()) fail(ErrorKind::Size, "the transform needs n >= 3");
  const auto f = cumulative_f(t);
  if (f.back() < 0.0) fail(ErrorKind::Domain, "f_{n-2} < 0: t is outside the transform range");
  return inverse_impl(t, f.back(), w1, w2);
}

std::vector<double> inverse_map(std::span<const double> t, double f_last, double w1, double w2) {
  if (t.empty()) fail(ErrorKind::Size, "the transform needs n >= 3");
  if (f_last < 0.0) fail(ErrorKind::Domain, "f_{n-2} < 0: t is outside the transform range");
  return inverse_impl(t, f_last, w1, w2);
}

OrderedSample inverse(const TransformCoords& c, std::size_t n) {
  require_n(n);
  if (c.t.size() != n - 2) fail(ErrorKind::Size, "coordinates do not match n");
  if (!(c.w2 > 0.0)) fail(ErrorKind::Domain, "w2 must be > 0");
  const double f_last = c.f.size() == c.t.size() ? c.f.back() : cumulative_f(c.t).back();
  if (f_last < 0.0) fail(ErrorKind::Domain, "f_{n-2} < 0: t is outside the transform range");
  if (!region_membership(c.t, n)) fail(ErrorKind::Domain, "t is outside B_{n-2}; the reconstruction would not be ordered");
  const auto x = inverse_impl(c.t, f_last, c.w1, c.w2);
  return OrderedSample::from_unsorted(x);
}

double jacobian_abs(const TransformCoords& c, std::size_t n) {
  require_n(n);
  if (c.t.size() != n - 2) fail(ErrorKind::Size, "coordinates do not match n");
  const double f_last = c.f.size() == c.t.size() ? c.f.back() : cumulative_f(c.t).back();
  if (!(f_last > 0.0)) fail(ErrorKind::Singularity, "Jacobian is singular at f_{n-2} = 0");
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) * std::pow(nn - 1.0, (nn - 1.0) / 2.0) * std::pow(c.w2, nn - 2.0) / std::sqrt(f_last);
}

bool region_membership(std::span<const double> t, std::size_t n, double slack) {
  require_n(n);
  if (t.size() != n - 2) fail(ErrorKind::Size, "t must have n-2 entries");
  const double nn = static_cast<double>(n);
  if (!(t[0] >= -1.0 - slack && t[0] <= -1.0 / (nn - 1.0) + slack)) return false;
  double ss = t[0] * t[0];
  for (std::size_t k = 2; k <= n - 2; ++k) {
    const double f_prev = 1.0 - ss;
    if (f_prev < -slack) return false;
    const double root = std::sqrt(std::max(f_prev, 0.0));
    const double nk = nn - static_cast<double>(k);
    const double lower = std::max(std::sqrt((nk + 2.0) / nk) * t[k - 2], -root);
    const double upper = -root / nk;
    const double tk = t[k - 1];
    if (!(tk >= lower - slack && tk <= upper + slack)) return false;
    ss += tk * tk;
  }
  return true;
}

double studentized_density(std::span<const double> t, std::size_t n) {
  if (!region_membership(t, n, 0.0)) return 0.0;
  const double f_last = cumulative_f(t).back();
  if (!(f_last > 0.0)) fail(ErrorKind::Singularity, "density is singular at f_{n-2} = 0");
  return 1.0 / (normalization_closed_form(n) * std::sqrt(f_last));
}

double normalization_closed_form(std::size_t n) {
  require_n(n);
  const double nn = static_cast<double>(n);
  const double log_value = std::log(2.0) + 0.5 * (nn - 1.0) * std::log(std::numbers::pi) - std::lgamma(nn + 1.0) -
                           std::lgamma((nn - 1.0) / 2.0);
  return std::exp(log_value);
}

}  // namespace fdstat
