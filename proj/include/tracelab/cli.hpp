#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace tracelab::cli {

using json = nlohmann::json;
using ParamMap = std::map<std::string, std::string>;

inline constexpr const char* kVersion = "0.3.0";

/// Keys accepted in config files (the long flag names without dashes).
const std::vector<std::string>& known_keys();

/// Flat `key=value` text, `#` starts a comment. Unknown keys and malformed
/// lines raise ParseError naming the line number.
ParamMap parse_config(const std::string& text);
ParamMap load_config(const std::string& path);

/// File values overlaid by explicitly given flags.
ParamMap merge_params(const ParamMap& file_values, const ParamMap& flag_values);

/// One persisted result row.
struct ExperimentRecord {
  std::string command;
  ParamMap params;
  json outputs = json::object();
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string version = kVersion;
};

json to_json(const ExperimentRecord& record);

/// Runs one subcommand. Exit codes: 0 success, 1 failed check, 2 usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tracelab::cli
