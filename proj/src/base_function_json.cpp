#include <string>

#include "fdstat/base_function.hpp"
#include "fdstat/error.hpp"

namespace fdstat {

// Descriptor layout:
//   {"family": "...", "n": int, "degree": real, "coefficients": [...],
//    "exponents": [p, q],      (MixedPower only)
//    "root": bool,             (optional, default false)
//    "label": "..."}           (optional)
// Doubles are written in shortest round-trip form, so parse(dump(u)) is bit-exact.
nlohmann::json to_json(const BaseFunction& u) {
  if (u.family() == Family::Custom) {
    fail(ErrorKind::Parameter, "Custom base functions carry a callback and cannot be serialized");
  }
  nlohmann::json j{{"family", to_string(u.family())},
                   {"n", u.arity()},
                   {"degree", u.degree()},
                   {"coefficients", u.coefficients()}};
  if (u.family() == Family::MixedPower) j["exponents"] = {u.p(), u.q()};
  if (u.is_root_normalized()) j["root"] = true;
  j["label"] = u.label();
  return j;
}

BaseFunction base_function_from_json(const nlohmann::json& j) {
  try {
    const Family family = family_from_string(j.at("family").get<std::string>());
    const auto n = j.at("n").get<std::size_t>();
    const auto degree = j.at("degree").get<double>();
    auto a = j.at("coefficients").get<std::vector<double>>();

    auto built = [&]() -> BaseFunction {
      switch (family) {
        case Family::Linear:
          if (a.size() != n) fail(ErrorKind::Parse, "Linear needs n coefficients");
          if (degree != 1.0) fail(ErrorKind::Parse, "Linear base functions have degree 1");
          return BaseFunction::linear(std::move(a));
        case Family::PowerSum:
          if (a.size() != n) fail(ErrorKind::Parse, "PowerSum needs n coefficients");
          return BaseFunction::power_sum(degree, std::move(a));
        case Family::PairwisePower: return BaseFunction::pairwise_power(degree, n, std::move(a));
        case Family::QuadraticForm:
          if (degree != 2.0) fail(ErrorKind::Parse, "QuadraticForm base functions have degree 2");
          return BaseFunction::quadratic_form(n, std::move(a));
        case Family::MixedPower: {
          const auto e = j.at("exponents").get<std::vector<double>>();
          if (e.size() != 2) fail(ErrorKind::Parse, "MixedPower needs exponents [p, q]");
          if (e[0] + e[1] != degree) fail(ErrorKind::Parse, "MixedPower degree must equal p + q");
          return BaseFunction::mixed_power(e[0], e[1], n, std::move(a));
        }
        case Family::Custom: break;
      }
      fail(ErrorKind::Parse, "Custom base functions cannot be read from a descriptor");
    }();

    if (j.value("root", false)) built = built.root_normalized();
    if (j.contains("label")) built = built.with_label(j.at("label").get<std::string>());
    return built;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed base function descriptor: ") + e.what());
  }
}

}  // namespace fdstat
