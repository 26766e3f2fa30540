#pragma once

#include <string>

#include <json.hpp>

namespace tracelab {

using json = nlohmann::json;

/// Outcome of a numeric inequality check `lhs <= rhs * (1 + slack)`.
/// When a check covers several inequalities, lhs/rhs describe the one with
/// the least headroom and `details` holds the per-item breakdown.
struct CheckReport {
  std::string check;
  json inputs = json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
  json details = json::object();

  /// Record one inequality; keeps the tightest one in lhs/rhs.
  void require(double lhs_value, double rhs_value, const std::string& label = {});
  /// Record a boolean condition (an exact identity, say).
  void require_true(bool condition, const std::string& label);

 private:
  double worst_ratio_ = -1.0;
};

json to_json(const CheckReport& report);

}  // namespace tracelab
