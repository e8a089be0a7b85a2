#pragma once

#include <json.hpp>
#include <optional>
#include <string>

namespace vclab::cli {

/// Exit codes: 0 success/complete, 1 verification failure, 2 invalid input,
/// 3 indeterminate.
struct CliResult {
  int exit_code = 0;
  std::string output;   // JSON or CSV payload
  std::string message;  // diagnostics for stderr
};

CliResult cmd_bounds(const nlohmann::json& config, const std::string& format);
CliResult cmd_verify(const nlohmann::json& config);
CliResult cmd_respond(const nlohmann::json& system_doc, const nlohmann::json& control_doc,
                      std::optional<double> tau_override, bool oracle);
CliResult cmd_learn(const nlohmann::json& config);
CliResult cmd_selftest(double perturb_closed_form = 0.0);

}  // namespace vclab::cli
