#include "tracelab/report.hpp"

#include <cmath>
#include <limits>

namespace tracelab {

void CheckReport::require(double lhs_value, double rhs_value, const std::string& label) {
  const bool ok = lhs_value <= rhs_value * (1.0 + slack) || lhs_value <= rhs_value;
  if (!ok) pass = false;
  // Headroom as lhs/rhs; a failing item always becomes the reported one.
  double ratio;
  if (rhs_value > 0.0)
    ratio = lhs_value / rhs_value;
  else
    ratio = lhs_value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
  if (ratio > worst_ratio_ || (!ok && pass)) {
    worst_ratio_ = ratio;
    lhs = lhs_value;
    rhs = rhs_value;
  }
  if (!label.empty() && !ok) details["failed"].push_back({{"item", label}, {"lhs", lhs_value}, {"rhs", rhs_value}});
}

void CheckReport::require_true(bool condition, const std::string& label) {
  if (!condition) {
    pass = false;
    details["failed"].push_back({{"item", label}});
  }
}

json to_json(const CheckReport& report) {
  auto finite_or_string = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  json j{{"check", report.check},
         {"inputs", report.inputs},
         {"lhs", finite_or_string(report.lhs)},
         {"rhs", finite_or_string(report.rhs)},
         {"slack", report.slack},
         {"pass", report.pass}};
  if (!report.details.empty()) j["details"] = report.details;
  return j;
}

}  // namespace tracelab
