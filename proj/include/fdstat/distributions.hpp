#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdstat/random.hpp"

namespace fdstat {

enum class DistFamily { Normal, Uniform, Exponential, Laplace, StudentT };

const char* to_string(DistFamily f) noexcept;
DistFamily dist_family_from_string(const std::string& s);

/// Location-scale family member. Uniform covers [location, location + scale);
/// Exponential is location + scale * Exp(1); StudentT uses `df`.
struct DistributionSpec {
  DistFamily family = DistFamily::Normal;
  double location = 0.0;
  double scale = 1.0;
  double df = 0.0;

  /// Throws ErrorKind::Parameter unless scale > 0 (and df > 0 for StudentT).
  void validate() const;
};

/// One draw. Inverse CDF for Uniform/Exponential/Laplace, polar method for
/// Normal, normal over sqrt(chi^2/df) for StudentT (chi^2 via squeeze-rejection gamma).
double draw(const DistributionSpec& spec, Engine& eng);

/// n i.i.d. draws. Throws ErrorKind::Parameter for invalid specs, ErrorKind::Size for n < 1.
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Engine& eng);

nlohmann::json to_json(const DistributionSpec& spec);
DistributionSpec distribution_from_json(const nlohmann::json& j);

}  // namespace fdstat
