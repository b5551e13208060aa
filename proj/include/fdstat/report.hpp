#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdstat {

/// How `measured` is judged against `tolerance`.
enum class Criterion {
  Discrepancy,  // passed iff measured <= tolerance
  Slack,        // passed iff measured >= -tolerance (bound slack, negative = violated)
  Exceedance,   // passed iff measured >= tolerance (negative controls)
};

struct VerificationReport {
  std::string check_name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  Criterion criterion = Criterion::Discrepancy;
  std::vector<std::vector<double>> witnesses;
  nlohmann::json metadata = nlohmann::json::object();

  /// Recomputes `passed` from measured/tolerance/criterion.
  void decide();
  /// AND-combines an extra condition into `passed` after decide().
  void require(bool condition, const std::string& reason);
};

bool criterion_satisfied(Criterion c, double measured, double tolerance) noexcept;
const char* to_string(Criterion c) noexcept;

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

}  // namespace fdstat
