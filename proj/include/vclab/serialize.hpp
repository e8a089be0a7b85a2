#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "vclab/bounds.hpp"
#include "vclab/response.hpp"

namespace vclab {

/// Raised on any schema violation; the message carries the JSON field path.
struct SchemaError : std::runtime_error {
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what) {}
};

using ojson = nlohmann::ordered_json;

/// A system document: the basis family plus either the full modal
/// parameterization or the compact bounded one (marked by "jordan_tag").
struct SystemDescription {
  BasisFamily family;
  bool compact = false;
  FullSystemParams full;
  CompactSystemParams comp;

  std::vector<double> lambda_vector(double tau) const;  // scalar-output systems
};

// Field-checked parsers. `path` prefixes error messages ("config.basis[2].ell: ...").
BasisFunction parse_basis_function(const nlohmann::json& j, const std::string& path);
BasisFamily parse_family(const nlohmann::json& j, const std::string& path);
SystemDescription parse_system(const nlohmann::json& j, const std::string& path);
std::pair<ControlMatrix, std::optional<double>> parse_control(const nlohmann::json& j,
                                                              const std::string& path);

// Checked field access helpers shared by the CLI config parsers.
const nlohmann::json& require_field(const nlohmann::json& j, const std::string& name,
                                    const std::string& path);
double as_double(const nlohmann::json& j, const std::string& path);
long long as_int(const nlohmann::json& j, const std::string& path);
std::string as_string(const nlohmann::json& j, const std::string& path);

ojson basis_function_to_json(const BasisFunction& w);
ojson family_to_json(const BasisFamily& family);
ojson system_to_json(const SystemDescription& sys);
ojson control_to_json(const ControlMatrix& G, double tau);

ojson bound_report_to_json(const BoundReport& report);
std::string bound_report_to_csv_row(const BoundReport& report);
std::string bound_reports_to_csv(const std::vector<BoundReport>& reports);

/// Shortest round-trip-exact decimal rendering used by every CSV/JSON writer
/// (17 significant digits, '.' decimal point).
std::string format_real(double v);

}  // namespace vclab
