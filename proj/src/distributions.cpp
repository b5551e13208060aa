#include "fdstat/distributions.hpp"

#include <cmath>

#include "fdstat/error.hpp"

namespace fdstat {

const char* to_string(DistFamily f) noexcept {
  switch (f) {
    case DistFamily::Normal: return "Normal";
    case DistFamily::Uniform: return "Uniform";
    case DistFamily::Exponential: return "Exponential";
    case DistFamily::Laplace: return "Laplace";
    case DistFamily::StudentT: return "StudentT";
  }
  return "Unknown";
}

DistFamily dist_family_from_string(const std::string& s) {
  for (DistFamily f : {DistFamily::Normal, DistFamily::Uniform, DistFamily::Exponential, DistFamily::Laplace,
                       DistFamily::StudentT}) {
    if (s == to_string(f)) return f;
  }
  fail(ErrorKind::Parse, "unknown distribution family '" + s + "'");
}

void DistributionSpec::validate() const {
  if (!std::isfinite(location)) fail(ErrorKind::Parameter, "location must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorKind::Parameter, "scale must be finite and > 0");
  if (family == DistFamily::StudentT && (!(df > 0.0) || !std::isfinite(df))) {
    fail(ErrorKind::Parameter, "StudentT needs df > 0");
  }
}

namespace {

// Squeeze-rejection gamma; shape < 1 boosted via Gamma(a) = Gamma(a+1) U^(1/a).
double standard_gamma(double shape, Engine& eng) {
  if (shape < 1.0) {
    const double u = 1.0 - uniform01(eng);  // (0, 1]
    return standard_gamma(shape + 1.0, eng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double draw(const DistributionSpec& spec, Engine& eng) {
  double z = 0.0;
  switch (spec.family) {
    case DistFamily::Normal: z = standard_normal(eng); break;
    case DistFamily::Uniform: z = uniform01(eng); break;
    case DistFamily::Exponential: z = -std::log1p(-uniform01(eng)); break;
    case DistFamily::Laplace: {
      const double u = uniform01(eng) - 0.5;  // [-0.5, 0.5)
      z = u < 0.0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
      break;
    }
    case DistFamily::StudentT: {
      const double num = standard_normal(eng);
      const double chi2 = 2.0 * standard_gamma(spec.df / 2.0, eng);
      z = num / std::sqrt(chi2 / spec.df);
      break;
    }
  }
  return spec.location + spec.scale * z;
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Engine& eng) {
  spec.validate();
  if (n < 1) fail(ErrorKind::Size, "sample size must be >= 1");
  std::vector<double> out(n);
  for (auto& x : out) x = draw(spec, eng);
  return out;
}

nlohmann::json to_json(const DistributionSpec& spec) {
  nlohmann::json j{{"family", to_string(spec.family)}, {"location", spec.location}, {"scale", spec.scale}};
  if (spec.family == DistFamily::StudentT) j["df"] = spec.df;
  return j;
}

DistributionSpec distribution_from_json(const nlohmann::json& j) {
  try {
    DistributionSpec s;
    s.family = dist_family_from_string(j.at("family").get<std::string>());
    s.location = j.value("location", 0.0);
    s.scale = j.value("scale", 1.0);
    s.df = j.value("df", 0.0);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed distribution spec: ") + e.what());
  }
}

}  // namespace fdstat
