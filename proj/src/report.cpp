#include "fdstat/report.hpp"

#include <cmath>

#include "fdstat/error.hpp"

namespace fdstat {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Input: return "input";
    case ErrorKind::Size: return "size";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

bool criterion_satisfied(Criterion c, double measured, double tolerance) noexcept {
  if (std::isnan(measured)) return false;
  switch (c) {
    case Criterion::Discrepancy: return measured <= tolerance;
    case Criterion::Slack: return measured >= -tolerance;
    case Criterion::Exceedance: return measured >= tolerance;
  }
  return false;
}

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::Discrepancy: return "discrepancy";
    case Criterion::Slack: return "slack";
    case Criterion::Exceedance: return "exceedance";
  }
  return "unknown";
}

void VerificationReport::decide() { passed = criterion_satisfied(criterion, measured, tolerance); }

void VerificationReport::require(bool condition, const std::string& reason) {
  if (!condition) {
    passed = false;
    metadata["failed_conditions"].push_back(reason);
  }
}

namespace {

Criterion criterion_from_string(const std::string& s) {
  if (s == "discrepancy") return Criterion::Discrepancy;
  if (s == "slack") return Criterion::Slack;
  if (s == "exceedance") return Criterion::Exceedance;
  fail(ErrorKind::Parse, "unknown criterion '" + s + "'");
}

// JSON has no NaN/inf; encode them as strings so reports stay parseable.
nlohmann::json number_or_tag(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  fail(ErrorKind::Parse, "expected a number, got '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
  return nlohmann::json{{"check_name", r.check_name},
                        {"passed", r.passed},
                        {"measured", number_or_tag(r.measured)},
                        {"tolerance", number_or_tag(r.tolerance)},
                        {"criterion", to_string(r.criterion)},
                        {"witnesses", r.witnesses},
                        {"metadata", r.metadata}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  try {
    VerificationReport r;
    r.check_name = j.at("check_name").get<std::string>();
    r.passed = j.at("passed").get<bool>();
    r.measured = number_from(j.at("measured"));
    r.tolerance = number_from(j.at("tolerance"));
    r.criterion = criterion_from_string(j.value("criterion", std::string("discrepancy")));
    r.witnesses = j.value("witnesses", std::vector<std::vector<double>>{});
    r.metadata = j.value("metadata", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed verification report: ") + e.what());
  }
}

}  // namespace fdstat
