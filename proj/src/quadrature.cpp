#include "fdstat/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fdstat/error.hpp"
#include "fdstat/parallel.hpp"
#include "fdstat/summation.hpp"

namespace fdstat {

namespace {

constexpr std::size_t kOrder = 10;

struct Rule {
  std::array<double, kOrder> x;  // nodes on [-1, 1]
  std::array<double, kOrder> w;
};

const Rule& gauss_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kOrder>;
    Rule r{};
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x[k] = -a[i];
      r.w[k++] = wt[i];
      if (a[i] != 0.0) {
        r.x[k] = a[i];
        r.w[k++] = wt[i];
      }
    }
    return r;
  }();
  return rule;
}

struct Node {
  double theta;
  double weight;  // includes dtheta/du for graded pieces
};

// Composite Gauss-Legendre nodes over [a, b]; with `graded`, theta = a + (b-a) u^2.
void append_nodes(std::vector<Node>& out, double a, double b, std::size_t cells, bool graded) {
  if (!(b > a)) return;
  const Rule& rule = gauss_rule();
  const double h = 1.0 / static_cast<double>(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double lo = static_cast<double>(c) * h;
    for (std::size_t i = 0; i < kOrder; ++i) {
      const double u = lo + 0.5 * h * (rule.x[i] + 1.0);
      const double wu = 0.5 * h * rule.w[i];
      if (graded) {
        out.push_back({a + (b - a) * u * u, wu * 2.0 * (b - a) * u});
      } else {
        out.push_back({a + (b - a) * u, wu * (b - a)});
      }
    }
  }
}

class RegionIntegrator {
 public:
  RegionIntegrator(std::size_t n, std::size_t cells, const RegionIntegrand& g)
      : n_(n), d_(n - 2), cells_(cells), g_(g) {}

  // Nodes of dimension k (0-based) given theta_{k-1}.
  std::vector<Node> nodes(std::size_t k, double prev_theta) const {
    const double nn = static_cast<double>(n_);
    const double kk = static_cast<double>(k);
    double lower = -std::numbers::pi / 2.0;
    if (k > 0) {
      const double r = std::sqrt((nn - kk + 1.0) / (nn - kk - 1.0));
      lower = std::asin(std::max(r * std::tan(prev_theta), -1.0));
    }
    const double upper = std::asin(-1.0 / (nn - kk - 1.0));
    std::vector<Node> out;
    if (!(upper > lower)) return out;
    out.reserve(2 * cells_ * kOrder);
    if (k + 1 < d_) {
      // The next dimension's lower limit switches from -pi/2 to
      // asin(r tan theta) at theta = atan(-1/r), with a square-root onset.
      const double r_next = std::sqrt((nn - kk) / (nn - kk - 2.0));
      const double brk = std::atan(-1.0 / r_next);
      if (brk > lower && brk < upper) {
        append_nodes(out, lower, brk, cells_, false);
        append_nodes(out, brk, upper, cells_, true);
        return out;
      }
    }
    append_nodes(out, lower, upper, cells_, false);
    return out;
  }

  double at_node(std::size_t k, const Node& node, double sqrt_f_prev, std::vector<double>& t) const {
    const double s = std::sin(node.theta);
    const double c = std::cos(node.theta);
    t[k] = sqrt_f_prev * s;
    const double sqrt_f = sqrt_f_prev * c;
    const double w = node.weight * std::pow(c, static_cast<double>(d_ - 1 - k));
    if (k + 1 == d_) return w * g_(t, sqrt_f * sqrt_f);
    return w * inner(k + 1, node.theta, sqrt_f, t);
  }

  double inner(std::size_t k, double prev_theta, double sqrt_f_prev, std::vector<double>& t) const {
    double sum = 0.0;
    for (const Node& node : nodes(k, prev_theta)) sum += at_node(k, node, sqrt_f_prev, t);
    return sum;
  }

  double run() const {
    const auto outer = nodes(0, 0.0);
    const auto parts = parallel_map(outer.size(), [&](std::size_t i) {
      std::vector<double> t(d_, 0.0);
      return at_node(0, outer[i], 1.0, t);
    });
    return pairwise_sum(parts);
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::size_t cells_;
  const RegionIntegrand& g_;
};

}  // namespace

double integrate_over_region_fixed(std::size_t n, std::size_t cells, const RegionIntegrand& g) {
  if (n < 3) fail(ErrorKind::Size, "B_{n-2} needs n >= 3");
  if (cells < 1) fail(ErrorKind::Parameter, "quadrature needs at least one cell");
  return RegionIntegrator(n, cells, g).run();
}

QuadratureResult integrate_over_region(std::size_t n, std::size_t cells, const RegionIntegrand& g) {
  QuadratureResult r;
  r.cells = cells;
  r.value = integrate_over_region_fixed(n, cells, g);
  const std::size_t reference = cells >= 2 ? cells / 2 : 2;
  r.est_error = std::abs(r.value - integrate_over_region_fixed(n, reference, g));
  return r;
}

QuadratureResult normalization_constant(std::size_t n, std::size_t cells) {
  if (n < 3 || n > 8) fail(ErrorKind::Parameter, "normalization quadrature supports n in [3, 8], got " + std::to_string(n));
  return integrate_over_region(n, cells, [](std::span<const double>, double) { return 1.0; });
}

}  // namespace fdstat
