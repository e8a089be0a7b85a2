#include "vclab/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace vclab {

namespace {

TrigKind parse_kind(const nlohmann::json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "sin") return TrigKind::Sin;
  if (s == "cos") return TrigKind::Cos;
  throw SchemaError(path, "expected \"sin\" or \"cos\", got \"" + s + "\"");
}

const nlohmann::json& as_array(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

}  // namespace

const nlohmann::json& require_field(const nlohmann::json& j, const std::string& name,
                                    const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw SchemaError(path + "." + name, "missing required field");
  return *it;
}

double as_double(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

long long as_int(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long long>();
}

std::string as_string(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

BasisFunction parse_basis_function(const nlohmann::json& j, const std::string& path) {
  BasisFunction w;
  w.ell = static_cast<int>(as_int(require_field(j, "ell", path), path + ".ell"));
  w.alpha = as_double(require_field(j, "alpha", path), path + ".alpha");
  w.beta = as_double(require_field(j, "beta", path), path + ".beta");
  w.kind = parse_kind(require_field(j, "kind", path), path + ".kind");
  return w;
}

BasisFamily parse_family(const nlohmann::json& j, const std::string& path) {
  const auto& arr = as_array(j, path);
  std::vector<BasisFunction> elems;
  for (size_t i = 0; i < arr.size(); ++i)
    elems.push_back(parse_basis_function(arr[i], path + "[" + std::to_string(i) + "]"));
  try {
    return BasisFamily(std::move(elems));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

SystemDescription parse_system(const nlohmann::json& j, const std::string& path) {
  BasisFamily family = parse_family(require_field(j, "basis", path), path + ".basis");
  const int k = family.size();

  if (j.contains("jordan_tag")) {
    // Compact form: coeffs is m x n, eigen_table is a flat list of n reals.
    JordanTag tag;
    try {
      tag = JordanTag::parse(as_string(j.at("jordan_tag"), path + ".jordan_tag"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + ".jordan_tag", e.what());
    }
    const auto& coeffs_json = as_array(require_field(j, "coeffs", path), path + ".coeffs");
    const auto& eigen_json =
        as_array(require_field(j, "eigen_table", path), path + ".eigen_table");

    const int m = static_cast<int>(coeffs_json.size());
    const int n = static_cast<int>(eigen_json.size());
    std::vector<double> coeffs;
    for (int i = 0; i < m; ++i) {
      const std::string rpath = path + ".coeffs[" + std::to_string(i) + "]";
      const auto& row = as_array(coeffs_json[static_cast<size_t>(i)], rpath);
      if (static_cast<int>(row.size()) != n)
        throw SchemaError(rpath, "expected " + std::to_string(n) + " entries");
      for (size_t l = 0; l < row.size(); ++l)
        coeffs.push_back(as_double(row[l], rpath + "[" + std::to_string(l) + "]"));
    }
    std::vector<double> eigen;
    for (size_t r = 0; r < eigen_json.size(); ++r)
      eigen.push_back(
          as_double(eigen_json[r], path + ".eigen_table[" + std::to_string(r) + "]"));

    try {
      CompactSystemParams comp(m, n, std::move(coeffs), std::move(eigen), tag);
      return SystemDescription{std::move(family), true, FullSystemParams{}, std::move(comp)};
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, e.what());
    }
  }

  // Full form: coeffs nested (m x n x 2n x p), eigen_table rows of four.
  const auto& coeffs_json = as_array(require_field(j, "coeffs", path), path + ".coeffs");
  const auto& eigen_json = as_array(require_field(j, "eigen_table", path), path + ".eigen_table");
  const auto& offset_json = as_array(require_field(j, "offset", path), path + ".offset");

  const int m = static_cast<int>(coeffs_json.size());
  const int n = static_cast<int>(eigen_json.size());
  const int p = static_cast<int>(offset_json.size());
  if (m < 1) throw SchemaError(path + ".coeffs", "expected at least one input row");
  if (n < 1) throw SchemaError(path + ".eigen_table", "expected at least one row");
  if (p < 1) throw SchemaError(path + ".offset", "expected at least one output entry");

  std::vector<double> coeffs;
  coeffs.reserve(static_cast<size_t>(m) * n * 2 * n * p);
  for (int i = 0; i < m; ++i) {
    const std::string ipath = path + ".coeffs[" + std::to_string(i) + "]";
    const auto& by_row = as_array(coeffs_json[static_cast<size_t>(i)], ipath);
    if (static_cast<int>(by_row.size()) != n)
      throw SchemaError(ipath, "expected n = " + std::to_string(n) + " rows");
    for (int r = 0; r < n; ++r) {
      const std::string rpath = ipath + "[" + std::to_string(r) + "]";
      const auto& by_mode = as_array(by_row[static_cast<size_t>(r)], rpath);
      if (static_cast<int>(by_mode.size()) != 2 * n)
        throw SchemaError(rpath, "expected 2n = " + std::to_string(2 * n) + " mode entries");
      for (int l = 0; l < 2 * n; ++l) {
        const std::string lpath = rpath + "[" + std::to_string(l) + "]";
        const auto& by_out = as_array(by_mode[static_cast<size_t>(l)], lpath);
        if (static_cast<int>(by_out.size()) != p)
          throw SchemaError(lpath, "expected p = " + std::to_string(p) + " output entries");
        for (int kappa = 0; kappa < p; ++kappa)
          coeffs.push_back(as_double(by_out[static_cast<size_t>(kappa)],
                                     lpath + "[" + std::to_string(kappa) + "]"));
      }
    }
  }

  std::vector<std::array<double, 4>> eigen_table;
  for (int r = 0; r < n; ++r) {
    const std::string rpath = path + ".eigen_table[" + std::to_string(r) + "]";
    const auto& row = as_array(eigen_json[static_cast<size_t>(r)], rpath);
    if (row.size() != 4) throw SchemaError(rpath, "expected four entries (a, b, e^a cos b, e^a sin b)");
    std::array<double, 4> e{};
    for (size_t c = 0; c < 4; ++c)
      e[c] = as_double(row[c], rpath + "[" + std::to_string(c) + "]");
    eigen_table.push_back(e);
  }

  std::vector<double> offset;
  for (int kappa = 0; kappa < p; ++kappa)
    offset.push_back(as_double(offset_json[static_cast<size_t>(kappa)],
                               path + ".offset[" + std::to_string(kappa) + "]"));

  (void)k;
  try {
    FullSystemParams full(m, n, p, std::move(coeffs), std::move(eigen_table), std::move(offset));
    return SystemDescription{std::move(family), false, std::move(full), CompactSystemParams{}};
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

std::pair<ControlMatrix, std::optional<double>> parse_control(const nlohmann::json& j,
                                                              const std::string& path) {
  const auto& g_json = as_array(require_field(j, "G", path), path + ".G");
  const int m = static_cast<int>(g_json.size());
  if (m < 1) throw SchemaError(path + ".G", "expected at least one row");
  int k = -1;
  std::vector<double> entries;
  for (int i = 0; i < m; ++i) {
    const std::string rpath = path + ".G[" + std::to_string(i) + "]";
    const auto& row = as_array(g_json[static_cast<size_t>(i)], rpath);
    if (k < 0) k = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != k) throw SchemaError(rpath, "ragged row");
    for (size_t c = 0; c < row.size(); ++c)
      entries.push_back(as_double(row[c], rpath + "[" + std::to_string(c) + "]"));
  }
  std::optional<double> tau;
  if (j.contains("tau")) tau = as_double(j.at("tau"), path + ".tau");
  try {
    return {ControlMatrix(m, k, std::move(entries)), tau};
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ".G", e.what());
  }
}

std::vector<double> SystemDescription::lambda_vector(double tau) const {
  return compact ? precompute_lambda_j(comp, family, tau)
                 : precompute_lambda_j(full, family, tau);
}

ojson basis_function_to_json(const BasisFunction& w) {
  ojson j;
  j["ell"] = w.ell;
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["kind"] = to_string(w.kind);
  return j;
}

ojson family_to_json(const BasisFamily& family) {
  ojson arr = ojson::array();
  for (const BasisFunction& w : family.elements()) arr.push_back(basis_function_to_json(w));
  return arr;
}

ojson system_to_json(const SystemDescription& sys) {
  ojson j;
  j["basis"] = family_to_json(sys.family);
  if (sys.compact) {
    j["jordan_tag"] = sys.comp.tag.blocks;
    ojson coeffs = ojson::array();
    for (int i = 0; i < sys.comp.m; ++i) {
      ojson row = ojson::array();
      for (int l = 0; l < sys.comp.n; ++l)
        row.push_back(sys.comp.coeffs[static_cast<size_t>(i * sys.comp.n + l)]);
      coeffs.push_back(row);
    }
    j["coeffs"] = coeffs;
    j["eigen_table"] = sys.comp.eigen_params;
    return j;
  }
  const FullSystemParams& f = sys.full;
  ojson coeffs = ojson::array();
  for (int i = 0; i < f.m; ++i) {
    ojson by_row = ojson::array();
    for (int r = 0; r < f.n; ++r) {
      ojson by_mode = ojson::array();
      for (int l = 0; l < 2 * f.n; ++l) {
        ojson by_out = ojson::array();
        for (int kappa = 0; kappa < f.p; ++kappa) by_out.push_back(f.coeff(i, r, l, kappa));
        by_mode.push_back(by_out);
      }
      by_row.push_back(by_mode);
    }
    coeffs.push_back(by_row);
  }
  j["coeffs"] = coeffs;
  ojson eigen = ojson::array();
  for (const auto& row : f.eigen_table) eigen.push_back(std::vector<double>(row.begin(), row.end()));
  j["eigen_table"] = eigen;
  j["offset"] = f.offset;
  return j;
}

ojson control_to_json(const ControlMatrix& G, double tau) {
  ojson j;
  ojson rows = ojson::array();
  for (int i = 0; i < G.m; ++i) {
    ojson row = ojson::array();
    for (int c = 0; c < G.k; ++c) row.push_back(G(i, c));
    rows.push_back(row);
  }
  j["G"] = rows;
  j["tau"] = tau;
  return j;
}

ojson bound_report_to_json(const BoundReport& report) {
  ojson j;
  j["formula_id"] = report.formula_id;
  j["value"] = report.value;
  j["ceil_value"] = report.ceil_value;
  ojson inputs;
  for (const auto& [name, value] : report.inputs) inputs[name] = value;
  j["inputs"] = inputs;
  j["notes"] = report.notes;
  return j;
}

std::string bound_report_to_csv_row(const BoundReport& report) {
  std::string inputs;
  for (const auto& [name, value] : report.inputs) {
    if (!inputs.empty()) inputs += ';';
    inputs += name + "=" + format_real(value);
  }
  std::string notes;
  for (const auto& n : report.notes) {
    if (!notes.empty()) notes += ';';
    notes += n;
  }
  return report.formula_id + "," + format_real(report.value) + "," +
         format_real(report.ceil_value) + "," + inputs + "," + notes;
}

std::string bound_reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string out = "formula_id,value,ceil_value,inputs,notes\n";
  for (const BoundReport& r : reports) out += bound_report_to_csv_row(r) + "\n";
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace vclab
