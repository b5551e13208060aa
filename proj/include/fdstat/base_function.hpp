#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdstat/ordered_sample.hpp"
#include "fdstat/random.hpp"
#include "fdstat/report.hpp"

namespace fdstat {

enum class Family { Linear, PowerSum, PairwisePower, QuadraticForm, MixedPower, Custom };

const char* to_string(Family f) noexcept;
Family family_from_string(const std::string& s);

/// A base function U on the ordered zero-sum set A, i.e. the shape of a
/// statistic Z_n = U(x_(1) - mean, ..., x_(n) - mean).
///
/// Families and their coefficient layouts:
///   Linear         sum a_i l_i                         a: n values, degree 1
///   PowerSum       sum a_i |l_i|^p                     a: n values, degree p
///   PairwisePower  sum_ij a_ij |l_i - l_j|^p           a: n*n row-major, degree p
///   QuadraticForm  sum_ij a_ij l_i l_j                 a: n*n row-major, degree 2
///   MixedPower     sum_ij a_ij |l_i|^p |l_j|^q         a: n*n row-major, degree p+q
///   Custom         user callback with declared degree
///
/// Constructors enforce structural validity only (sizes, finiteness,
/// positive exponents, positive definiteness for QuadraticForm). Whether the
/// coefficients satisfy the known sufficient conditions for feasibility is
/// reported by sufficient_condition_warnings(); actual feasibility is
/// checked numerically by check_feasibility().
///
/// A root-normalized function evaluates U^(1/degree) and is homogeneous of
/// degree 1.
class BaseFunction {
 public:
  using Callback = std::function<double(std::span<const double>)>;

  static BaseFunction linear(std::vector<double> a);
  static BaseFunction power_sum(double p, std::vector<double> a);
  static BaseFunction pairwise_power(double p, std::size_t n, std::vector<double> a);
  static BaseFunction quadratic_form(std::size_t n, std::vector<double> a);
  static BaseFunction mixed_power(double p, double q, std::size_t n, std::vector<double> a);
  static BaseFunction custom(std::string label, std::size_t n, double degree, Callback fn);

  // Presets.
  static BaseFunction range(std::size_t n);          // Linear (-1, 0, ..., 0, 1)
  static BaseFunction gini(std::size_t n);           // PairwisePower p=1, a_ij = 1/(n(n-1))
  static BaseFunction variance(std::size_t n);       // PowerSum p=2, a_i = 1/(n-1)
  static BaseFunction sample_sd(std::size_t n);      // root of variance
  static BaseFunction standard_error(std::size_t n); // S_n / sqrt(n)
  /// "range" | "gini" | "variance" | "sd" | "standard_error"
  static BaseFunction preset(const std::string& name, std::size_t n);

  BaseFunction root_normalized() const;

  Family family() const noexcept { return family_; }
  std::size_t arity() const noexcept { return n_; }
  /// Declared homogeneity degree of the underlying U.
  double degree() const noexcept { return degree_; }
  /// Degree of what operator() returns (1 when root-normalized).
  double effective_degree() const noexcept { return root_ ? 1.0 : degree_; }
  bool is_root_normalized() const noexcept { return root_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  const std::vector<double>& coefficients() const noexcept { return a_; }
  const std::string& label() const noexcept { return label_; }
  BaseFunction with_label(std::string label) const;

  std::vector<std::string> sufficient_condition_warnings() const;

  /// Evaluates without domain checks. `point` must have arity() entries.
  double operator()(std::span<const double> point) const;

 private:
  BaseFunction() = default;
  double raw(std::span<const double> point) const;

  Family family_ = Family::Linear;
  std::size_t n_ = 0;
  double degree_ = 1.0;
  double p_ = 1.0;
  double q_ = 0.0;
  bool root_ = false;
  std::vector<double> a_;
  std::string label_;
  std::shared_ptr<const Callback> custom_;
};

/// U(point) for a point of A (sorted ascending, zero sum).
/// Throws ErrorKind::Domain otherwise, ErrorKind::Size on arity mismatch.
double evaluate(const BaseFunction& u, std::span<const double> point);

/// Z_n = U(x_(1) - mean, ..., x_(n) - mean).
double statistic(const BaseFunction& u, const OrderedSample& s);

/// Uniform draw on A_n: normal vector, centred, scaled to squared norm n-1, sorted.
std::vector<double> uniform_point_on_ordered_sphere(Engine& eng, std::size_t n);

/// Draws `trials` points of A_n and scales s in (0, 10]; checks U > 0 and
/// |U(s l) - s^p U(l)| <= 1e-8 s^p U(l). Deterministic in `seed`.
VerificationReport check_feasibility(const BaseFunction& u, std::size_t n, std::size_t trials, std::uint64_t seed);

struct BoundEstimate {
  double lower = 0.0;  // k
  double upper = 0.0;  // K
  std::vector<double> argmin;
  std::vector<double> argmax;
  std::size_t evaluations = 0;
};

/// Empirical min / max of a degree-1 U over A_n: `budget` random points,
/// then pair-exchange local search from the best starts.
BoundEstimate estimate_bounds(const BaseFunction& u, std::size_t n, std::size_t budget, std::uint64_t seed);

nlohmann::json to_json(const BaseFunction& u);
BaseFunction base_function_from_json(const nlohmann::json& j);

}  // namespace fdstat
