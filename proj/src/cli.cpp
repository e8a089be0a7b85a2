#include "vclab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>

#include "vclab/bounds.hpp"
#include "vclab/expsin.hpp"
#include "vclab/learn.hpp"
#include "vclab/selftest.hpp"
#include "vclab/serialize.hpp"
#include "vclab/shatter.hpp"

namespace vclab::cli {
namespace {

using nlohmann::json;

double field_or(const json& j, const std::string& name, double fallback,
                const std::string& path) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return as_double(j.at(name), path + "." + name);
}

long long int_field_or(const json& j, const std::string& name, long long fallback,
                       const std::string& path) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return as_int(j.at(name), path + "." + name);
}

std::string string_field_or(const json& j, const std::string& name, const std::string& fallback,
                            const std::string& path) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return as_string(j.at(name), path + "." + name);
}

RoundMode parse_round(const std::string& s, const std::string& path) {
  if (s == "floor") return RoundMode::Floor;
  if (s == "ceil") return RoundMode::Ceil;
  throw SchemaError(path, "expected \"floor\" or \"ceil\"");
}

BallKind parse_ball(const std::string& s, const std::string& path) {
  if (s == "open-inf") return BallKind::OpenInf;
  if (s == "closed-inf") return BallKind::ClosedInf;
  if (s == "closed-l2") return BallKind::ClosedL2;
  throw SchemaError(path, "expected \"open-inf\", \"closed-inf\" or \"closed-l2\"");
}

// ------------------------------------------------------------------ bounds

struct DimValues {
  ProblemDims dims;
  json raw;                    // formula-specific extras read on demand
  bool gamma_explicit = false; // gamma given in dims or swept by the grid
};

BoundReport evaluate_formula(const std::string& id, const DimValues& dv) {
  const ProblemDims& d = dv.dims;
  const json& raw = dv.raw;
  const std::string path = "config.dims";
  BoundReport r;
  r.formula_id = id;

  auto echo = [&](std::initializer_list<std::pair<std::string, double>> items) {
    for (const auto& item : items) r.inputs.push_back(item);
  };

  if (id == "vc_upper_scalar") {
    r.value = vc_upper_scalar(d.n, d.m, d.k, d.ell_max);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"k", double(d.k)}, {"ell_max", double(d.ell_max)}});
    r.notes.push_back("spelling=(1+2k)^n");
  } else if (id == "vc_lower") {
    const RoundMode variant =
        parse_round(string_field_or(raw, "variant", "floor", path), path + ".variant");
    r.value = static_cast<double>(vc_lower(d.n, d.k, variant));
    echo({{"n", double(d.n)}, {"k", double(d.k)}});
    r.notes.push_back(variant == RoundMode::Floor ? "variant=floor" : "variant=ceil");
  } else if (id == "vc_upper_vector") {
    r.value = vc_upper_vector(d.n, d.m, d.p, d.k, d.ell_max);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"p", double(d.p)}, {"k", double(d.k)},
          {"ell_max", double(d.ell_max)}});
  } else if (id == "pd_upper") {
    r.value = pd_upper(d.n, d.m, d.k, d.ell_max);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"k", double(d.k)}, {"ell_max", double(d.ell_max)}});
    r.notes.push_back("spelling=(2k+1)^n");
  } else if (id == "fat_lipschitz") {
    const double C = field_or(raw, "C", 1.0, path);
    const double L = field_or(raw, "L", 1.0, path);
    const BallKind ball =
        parse_ball(string_field_or(raw, "ball", "open-inf", path), path + ".ball");
    const FlaggedValue v = fat_lipschitz(d.k, C, L, d.gamma, ball);
    r.value = v.value;
    if (!v.note.empty()) r.notes.push_back(v.note);
    echo({{"k", double(d.k)}, {"C", C}, {"L", L}, {"gamma", d.gamma}});
  } else if (id == "fat_control") {
    const RoundMode rounding =
        parse_round(string_field_or(raw, "rounding", "ceil", path), path + ".rounding");
    const FlaggedValue v = fat_control(d.n, d.m, d.tau, d.M, d.gamma, rounding);
    r.value = v.value;
    if (!v.note.empty()) r.notes.push_back(v.note);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"tau", d.tau}, {"M", d.M}, {"gamma", d.gamma}});
  } else if (id == "fat_combined") {
    std::optional<double> gamma;
    if (dv.gamma_explicit) gamma = d.gamma;
    const FlaggedValue v = fat_combined(d, gamma);
    r.value = v.value;
    r.notes.push_back(v.note);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"k", double(d.k)}, {"ell_max", double(d.ell_max)},
          {"tau", d.tau}, {"M", d.M}, {"gamma", gamma ? *gamma : (0.25 - d.kappa) * d.eps}});
  } else if (id == "fat_hyperplane") {
    r.value = fat_hyperplane(d.R, d.gamma, d.k);
    echo({{"R", d.R}, {"gamma", d.gamma}, {"k", double(d.k)}});
  } else if (id == "sample_complexity_concept") {
    const double dim = field_or(raw, "d", 1.0, path);
    r.value = sample_complexity_concept(dim, d.eps, d.delta);
    echo({{"d", dim}, {"eps", d.eps}, {"delta", d.delta}});
  } else if (id == "sample_complexity_agnostic") {
    const double dim = field_or(raw, "d", 1.0, path);
    const double alpha = field_or(raw, "alpha", d.eps, path);
    const FlaggedValue v = sample_complexity_agnostic(dim, alpha, d.delta);
    r.value = v.value;
    r.notes.push_back(v.note);
    echo({{"d", dim}, {"alpha", alpha}, {"delta", d.delta}});
  } else if (id == "gj_bound") {
    const double ell = field_or(raw, "ell", 1.0, path);
    const double deg = field_or(raw, "d", 1.0, path);
    const double s = field_or(raw, "s", 1.0, path);
    r.value = gj_bound(ell, deg, s);
    echo({{"ell", ell}, {"d", deg}, {"s", s}});
  } else if (id == "sign_pattern_count") {
    const int n_vars = static_cast<int>(int_field_or(raw, "n_vars", 1, path));
    const double deg = field_or(raw, "d", 1.0, path);
    const double m_polys = field_or(raw, "m_polys", 1.0, path);
    r.value = sign_pattern_count(n_vars, deg, m_polys);
    echo({{"n_vars", double(n_vars)}, {"d", deg}, {"m_polys", m_polys}});
  } else if (id == "pole_free_count") {
    r.value = static_cast<double>(pole_free_count(d.n, d.k));
    echo({{"n", double(d.n)}, {"k", double(d.k)}});
  } else if (id == "dual_vc_lower") {
    const long long vc_dual = int_field_or(raw, "vc_dual", 1, path);
    if (vc_dual < 1) throw SchemaError(path + ".vc_dual", "must be >= 1");
    r.value = static_cast<double>(dual_vc_lower(static_cast<unsigned long long>(vc_dual)));
    echo({{"vc_dual", double(vc_dual)}});
  } else if (id == "axis_shatter_bound") {
    if (!raw.is_object() || !raw.contains("r"))
      throw SchemaError(path + ".r", "missing required field");
    std::vector<long long> rs;
    const json& arr = raw.at("r");
    if (!arr.is_array()) throw SchemaError(path + ".r", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      rs.push_back(as_int(arr[i], path + ".r[" + std::to_string(i) + "]"));
    r.value = static_cast<double>(axis_shatter_bound(rs));
    for (size_t i = 0; i < rs.size(); ++i)
      r.inputs.push_back({"r" + std::to_string(i + 1), double(rs[i])});
  } else if (id == "dmax_rat") {
    r.value = static_cast<double>(dmax_rat(d.n, d.ell_max));
    echo({{"n", double(d.n)}, {"ell_max", double(d.ell_max)}});
  } else if (id == "rat_vc_abstract") {
    r.value = rat_vc_abstract(d.n, d.m, d.k, d.h_rat, d.d_rat);
    echo({{"n", double(d.n)}, {"m", double(d.m)}, {"k", double(d.k)}, {"h_rat", d.h_rat},
          {"d_rat", d.d_rat}});
  } else if (id == "xi_basis_count") {
    const std::string mode = string_field_or(raw, "mode", "closed-sum", path);
    if (mode != "closed-sum" && mode != "enumerate")
      throw SchemaError(path + ".mode", "expected \"closed-sum\" or \"enumerate\"");
    r.value = static_cast<double>(xi_basis_count(
        d.n, mode == "closed-sum" ? CountMode::ClosedSum : CountMode::Enumerate));
    echo({{"n", double(d.n)}});
    r.notes.push_back("mode=" + mode);
  } else {
    throw SchemaError("config.formulas", "unknown formula_id \"" + id + "\"");
  }

  if (!std::isfinite(r.value) || r.value < 0.0)
    throw SchemaError("config", "formula " + id + " produced a non-finite or negative value");
  r.ceil_value = std::ceil(r.value);
  return r;
}

ProblemDims parse_dims(const json& j, const std::string& path) {
  ProblemDims d;
  d.n = static_cast<int>(int_field_or(j, "n", d.n, path));
  d.m = static_cast<int>(int_field_or(j, "m", d.m, path));
  d.p = static_cast<int>(int_field_or(j, "p", d.p, path));
  d.k = int_field_or(j, "k", d.k, path);
  d.ell_max = static_cast<int>(int_field_or(j, "ell_max", d.ell_max, path));
  d.tau = field_or(j, "tau", d.tau, path);
  d.M = field_or(j, "M", d.M, path);
  d.R = field_or(j, "R", d.R, path);
  d.gamma = field_or(j, "gamma", d.gamma, path);
  d.eps = field_or(j, "eps", d.eps, path);
  d.delta = field_or(j, "delta", d.delta, path);
  d.kappa = field_or(j, "kappa", d.kappa, path);
  d.h_rat = field_or(j, "h_rat", d.h_rat, path);
  d.d_rat = field_or(j, "d_rat", d.d_rat, path);
  return d;
}

// Grid axes: integer lists or {"from","to"} ranges for n and k; value lists
// for gamma, eps, delta.
std::vector<long long> parse_int_axis(const json& j, const std::string& path) {
  std::vector<long long> out;
  if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  } else if (j.is_object()) {
    const long long from = as_int(require_field(j, "from", path), path + ".from");
    const long long to = as_int(require_field(j, "to", path), path + ".to");
    if (to < from) throw SchemaError(path, "empty range");
    for (long long v = from; v <= to; ++v) out.push_back(v);
  } else {
    throw SchemaError(path, "expected an array or {from, to}");
  }
  if (out.empty()) throw SchemaError(path, "empty axis");
  return out;
}

std::vector<double> parse_real_axis(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  if (out.empty()) throw SchemaError(path, "empty axis");
  return out;
}

}  // namespace

CliResult cmd_bounds(const nlohmann::json& config, const std::string& format) {
  try {
    const json& formulas_json = require_field(config, "formulas", "config");
    if (!formulas_json.is_array()) throw SchemaError("config.formulas", "expected an array");
    std::vector<std::string> formulas;
    for (size_t i = 0; i < formulas_json.size(); ++i)
      formulas.push_back(as_string(formulas_json[i], "config.formulas[" + std::to_string(i) + "]"));

    const json dims_json = config.contains("dims") ? config.at("dims") : json::object();
    if (!dims_json.is_object()) throw SchemaError("config.dims", "expected an object");
    const ProblemDims base = parse_dims(dims_json, "config.dims");

    // Build the sweep; a missing grid is a single point.
    std::vector<long long> ns{base.n}, ks{base.k};
    std::vector<double> gammas{base.gamma}, epss{base.eps}, deltas{base.delta};
    bool gamma_explicit = dims_json.contains("gamma");
    if (config.contains("grid")) {
      const json& grid = config.at("grid");
      if (!grid.is_object()) throw SchemaError("config.grid", "expected an object");
      if (grid.contains("n")) ns = parse_int_axis(grid.at("n"), "config.grid.n");
      if (grid.contains("k")) ks = parse_int_axis(grid.at("k"), "config.grid.k");
      if (grid.contains("gamma")) {
        gammas = parse_real_axis(grid.at("gamma"), "config.grid.gamma");
        gamma_explicit = true;
      }
      if (grid.contains("eps")) epss = parse_real_axis(grid.at("eps"), "config.grid.eps");
      if (grid.contains("delta")) deltas = parse_real_axis(grid.at("delta"), "config.grid.delta");
    }

    std::vector<BoundReport> reports;
    for (long long n : ns)
      for (long long k : ks)
        for (double gamma : gammas)
          for (double eps : epss)
            for (double delta : deltas) {
              DimValues dv{base, dims_json, gamma_explicit};
              dv.dims.n = static_cast<int>(n);
              dv.dims.k = k;
              dv.dims.gamma = gamma;
              dv.dims.eps = eps;
              dv.dims.delta = delta;
              for (const std::string& id : formulas) reports.push_back(evaluate_formula(id, dv));
            }

    CliResult result;
    if (format == "csv") {
      result.output = bound_reports_to_csv(reports);
    } else if (format == "json") {
      ojson out;
      out["reports"] = ojson::array();
      for (const BoundReport& r : reports) out["reports"].push_back(bound_report_to_json(r));
      result.output = out.dump(2) + "\n";
    } else {
      throw SchemaError("--format", "expected \"json\" or \"csv\"");
    }
    return result;
  } catch (const SchemaError& e) {
    return {2, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, "", e.what()};
  } catch (const std::range_error& e) {
    return {2, "", e.what()};
  }
}

namespace {

LambdaSearchConfig parse_search(const json& config, const std::string& path) {
  const json& j = require_field(config, "search", path);
  LambdaSearchConfig cfg;
  if (!j.contains("seed"))
    throw SchemaError(path + ".search.seed", "randomized commands require an explicit seed");
  cfg.seed = static_cast<std::uint64_t>(as_int(j.at("seed"), path + ".search.seed"));
  cfg.attempts = static_cast<int>(int_field_or(j, "attempts", cfg.attempts, path + ".search"));
  cfg.cond_threshold = field_or(j, "cond_threshold", cfg.cond_threshold, path + ".search");
  if (j.contains("range")) {
    const json& range = j.at("range");
    if (!range.is_array() || range.size() != 2)
      throw SchemaError(path + ".search.range", "expected [lo, hi]");
    cfg.range_lo = as_double(range[0], path + ".search.range[0]");
    cfg.range_hi = as_double(range[1], path + ".search.range[1]");
  }
  return cfg;
}

ParamSampler parse_sampler(const json& config, int default_dim, const std::string& path) {
  const json& j = require_field(config, "sampler", path);
  ParamSampler sampler;
  if (!j.contains("seed"))
    throw SchemaError(path + ".sampler.seed", "randomized commands require an explicit seed");
  sampler.seed = static_cast<std::uint64_t>(as_int(j.at("seed"), path + ".sampler.seed"));
  sampler.dim = static_cast<int>(int_field_or(j, "dim", default_dim, path + ".sampler"));
  sampler.half_width = field_or(j, "half_width", 1.0, path + ".sampler");
  return sampler;
}

std::vector<std::vector<double>> parse_points(const json& config, const std::string& path) {
  const json& j = require_field(config, "points", path);
  if (!j.is_array()) throw SchemaError(path + ".points", "expected an array of arrays");
  std::vector<std::vector<double>> points;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string ppath = path + ".points[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw SchemaError(ppath, "expected an array");
    std::vector<double> point;
    for (size_t c = 0; c < j[i].size(); ++c)
      point.push_back(as_double(j[i][c], ppath + "[" + std::to_string(c) + "]"));
    points.push_back(std::move(point));
  }
  if (points.empty()) throw SchemaError(path + ".points", "need at least one point");
  return points;
}

int verify_exit_code(const ShatterReport& report) {
  if (report.indeterminate_count > 0) return 3;
  return report.complete ? 0 : 1;
}

// Compact-system evaluator over controls: theta = (coeffs | eigen params).
// Caches the lambda vector for the most recent theta; the searches evaluate
// all points for one theta before moving on.
struct SystemResponseEvaluator {
  BasisFamily family;
  JordanTag tag;
  int n;
  double tau;
  mutable std::vector<double> last_theta;
  mutable std::vector<double> lambda;

  double value(std::span<const double> theta, std::span<const double> point) const {
    if (last_theta.size() != theta.size() ||
        !std::equal(theta.begin(), theta.end(), last_theta.begin())) {
      std::vector<double> coeffs(theta.begin(), theta.begin() + n);
      std::vector<double> eigen(theta.begin() + n, theta.end());
      const CompactSystemParams params(1, n, std::move(coeffs), std::move(eigen), tag);
      lambda = precompute_lambda_j(params, family, tau);
      last_theta.assign(theta.begin(), theta.end());
    }
    double acc = 0.0;
    for (size_t j = 0; j < lambda.size(); ++j) acc += lambda[j] * point[j];
    return acc;
  }
};

}  // namespace

CliResult cmd_verify(const nlohmann::json& config) {
  try {
    const std::string construction =
        as_string(require_field(config, "construction", "config"), "config.construction");

    ShatterReport report;
    if (construction == "section7") {
      const int k = static_cast<int>(as_int(require_field(config, "k", "config"), "config.k"));
      const double guard = field_or(config, "guard_factor", 1e3, "config");
      report = verify_section7(k, guard);
    } else if (construction == "axis") {
      const int n = static_cast<int>(as_int(require_field(config, "n", "config"), "config.n"));
      const BasisFamily family = parse_family(require_field(config, "basis", "config"), "config.basis");
      report = axis_shatter_construct(n, family, parse_search(config, "config"));
    } else if (construction == "hyperplane-kln" || construction == "hyperplane-nlk") {
      const int n = static_cast<int>(as_int(require_field(config, "n", "config"), "config.n"));
      const int k = static_cast<int>(as_int(require_field(config, "k", "config"), "config.k"));
      const BasisFamily family = parse_family(require_field(config, "basis", "config"), "config.basis");
      const HyperplaneMode mode =
          construction == "hyperplane-kln" ? HyperplaneMode::KLeN : HyperplaneMode::NLeK;
      report = hyperplane_lower_witness(mode, n, k, family, parse_search(config, "config"));
    } else if (construction == "empirical-vc") {
      const std::string evaluator_name =
          string_field_or(config, "evaluator", "halfspace-origin", "config");
      const auto points = parse_points(config, "config");
      const long long budget =
          as_int(require_field(config, "budget", "config"), "config.budget");

      if (evaluator_name == "halfspace-origin") {
        const int dim = static_cast<int>(points[0].size());
        const ParamSampler sampler = parse_sampler(config, dim, "config");
        SignEvaluator evaluator{"halfspace-origin", [](std::span<const double> w,
                                                       std::span<const double> x) {
                                  double acc = 0.0;
                                  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
                                  return acc > 0.0 ? 1 : 0;
                                }};
        report = empirical_vc_lower(evaluator, points, sampler, budget);
      } else if (evaluator_name == "system-response") {
        const int n = static_cast<int>(as_int(require_field(config, "n", "config"), "config.n"));
        BasisFamily family = parse_family(require_field(config, "basis", "config"), "config.basis");
        const double tau = field_or(config, "tau", 1.0, "config");
        const JordanTag tag =
            JordanTag::parse(string_field_or(config, "jordan_tag",
                                             JordanTag::all_real(n).blocks, "config"));
        auto shared = std::make_shared<SystemResponseEvaluator>(
            SystemResponseEvaluator{std::move(family), tag, n, tau, {}, {}});
        ParamSampler sampler = parse_sampler(config, 2 * n, "config");
        if (!(sampler.half_width < 1.0))
          throw SchemaError("config.sampler.half_width",
                            "system-response parameters must stay inside the open unit ball");
        SignEvaluator evaluator{"system-response",
                                [shared](std::span<const double> theta,
                                         std::span<const double> point) {
                                  return shared->value(theta, point) > 0.0 ? 1 : 0;
                                }};
        report = empirical_vc_lower(evaluator, points, sampler, budget);
      } else {
        throw SchemaError("config.evaluator",
                          "expected \"halfspace-origin\" or \"system-response\"");
      }
    } else if (construction == "empirical-fat") {
      const std::string evaluator_name = string_field_or(config, "evaluator", "linear", "config");
      const auto points = parse_points(config, "config");
      const long long budget = as_int(require_field(config, "budget", "config"), "config.budget");
      const double gamma = as_double(require_field(config, "gamma", "config"), "config.gamma");
      LevelSearchConfig levels;
      levels.levels_per_point =
          static_cast<int>(int_field_or(config, "levels_per_point", 9, "config"));

      if (evaluator_name == "linear") {
        const int dim = static_cast<int>(points[0].size());
        const ParamSampler sampler = parse_sampler(config, dim, "config");
        RealEvaluator evaluator{"linear", [](std::span<const double> w,
                                             std::span<const double> x) {
                                  double acc = 0.0;
                                  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
                                  return acc;
                                }};
        report = empirical_fat_lower(evaluator, points, gamma, levels, sampler, budget);
      } else if (evaluator_name == "system-response") {
        const int n = static_cast<int>(as_int(require_field(config, "n", "config"), "config.n"));
        BasisFamily family = parse_family(require_field(config, "basis", "config"), "config.basis");
        const double tau = field_or(config, "tau", 1.0, "config");
        const JordanTag tag =
            JordanTag::parse(string_field_or(config, "jordan_tag",
                                             JordanTag::all_real(n).blocks, "config"));
        auto shared = std::make_shared<SystemResponseEvaluator>(
            SystemResponseEvaluator{std::move(family), tag, n, tau, {}, {}});
        ParamSampler sampler = parse_sampler(config, 2 * n, "config");
        if (!(sampler.half_width < 1.0))
          throw SchemaError("config.sampler.half_width",
                            "system-response parameters must stay inside the open unit ball");
        RealEvaluator evaluator{"system-response",
                                [shared](std::span<const double> theta,
                                         std::span<const double> point) {
                                  return shared->value(theta, point);
                                }};
        report = empirical_fat_lower(evaluator, points, gamma, levels, sampler, budget);
      } else {
        throw SchemaError("config.evaluator", "expected \"linear\" or \"system-response\"");
      }
    } else {
      throw SchemaError("config.construction", "unknown construction \"" + construction + "\"");
    }

    CliResult result;
    result.exit_code = verify_exit_code(report);
    result.output = report.to_json().dump(2) + "\n";
    return result;
  } catch (const SchemaError& e) {
    return {2, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, "", e.what()};
  }
}

CliResult cmd_respond(const nlohmann::json& system_doc, const nlohmann::json& control_doc,
                      std::optional<double> tau_override, bool oracle) {
  try {
    const SystemDescription sys = parse_system(system_doc, "system");
    auto [G, file_tau] = parse_control(control_doc, "control");

    double tau;
    if (tau_override)
      tau = *tau_override;
    else if (file_tau)
      tau = *file_tau;
    else
      throw SchemaError("control.tau", "missing field and no --tau given");
    if (!(tau > 0)) throw SchemaError("control.tau", "must be positive");

    const FullSystemParams full = sys.compact ? expand_compact(sys.comp) : sys.full;
    ResponseDiagnostics diag;
    const std::vector<double> y = response_full(full, G, sys.family, tau, &diag);
    const std::vector<int> sign = sign_observe(y);

    ojson out;
    out["y"] = y;
    out["sign"] = sign;
    ojson branch;
    if (diag.degenerate_pairs.empty()) {
      branch["label"] = "regular";
    } else {
      std::string label = "degenerate:";
      std::set<int> omegas;
      for (const auto& [r, j] : diag.degenerate_pairs) omegas.insert(j + 1);
      bool first = true;
      for (int j : omegas) {
        if (!first) label += ",";
        label += "omega_" + std::to_string(j);
        first = false;
      }
      branch["label"] = label;
    }
    ojson pairs = ojson::array();
    for (const auto& [r, j] : diag.degenerate_pairs) pairs.push_back({r + 1, j + 1});
    branch["degenerate_pairs"] = pairs;
    out["branch"] = branch;

    if (oracle) {
      std::vector<double> y_quad(static_cast<size_t>(full.p));
      for (int kappa = 0; kappa < full.p; ++kappa) {
        auto integrand = [&](double t) {
          double acc = 0.0;
          for (int i = 0; i < full.m; ++i) {
            double u_i = 0.0;
            for (int j = 0; j < G.k; ++j) u_i += G(i, j) * sys.family[j](t);
            double gamma_i = 0.0;
            for (int r = 0; r < full.n; ++r) {
              const double a = full.eigen_table[static_cast<size_t>(r)][0];
              const double b = full.eigen_table[static_cast<size_t>(r)][1];
              for (int l = 0; l < 2 * full.n; ++l) {
                const double c = full.coeff(i, r, l, kappa);
                if (c == 0.0) continue;
                const int power = l < full.n ? l : l - full.n;
                const double trig = l < full.n ? std::cos(b * t) : std::sin(b * t);
                gamma_i += c * std::pow(t, power) * std::exp(a * t) * trig;
              }
            }
            acc += gamma_i * u_i;
          }
          return acc;
        };
        y_quad[static_cast<size_t>(kappa)] =
            full.offset[static_cast<size_t>(kappa)] + integrate_quadrature(integrand, tau, 1e-9);
      }
      double discrepancy = 0.0;
      for (int kappa = 0; kappa < full.p; ++kappa)
        discrepancy = std::max(discrepancy,
                               std::abs(y[static_cast<size_t>(kappa)] - y_quad[static_cast<size_t>(kappa)]));
      ojson oj;
      oj["quadrature"] = y_quad;
      oj["abs_discrepancy"] = discrepancy;
      out["oracle"] = oj;
    }

    return {0, out.dump(2) + "\n", ""};
  } catch (const SchemaError& e) {
    return {2, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, "", e.what()};
  }
}

CliResult cmd_learn(const nlohmann::json& config) {
  try {
    LearnConfig lc;
    lc.target = parse_system(require_field(config, "target", "config"), "config.target");
    lc.tau = field_or(config, "tau", 1.0, "config");
    if (!config.contains("seed"))
      throw SchemaError("config.seed", "randomized commands require an explicit seed");
    lc.seed = static_cast<std::uint64_t>(as_int(config.at("seed"), "config.seed"));

    const json& sizes = require_field(config, "sizes", "config");
    if (!sizes.is_array() || sizes.empty())
      throw SchemaError("config.sizes", "expected a nonempty array");
    for (size_t i = 0; i < sizes.size(); ++i)
      lc.sizes.push_back(
          static_cast<int>(as_int(sizes[i], "config.sizes[" + std::to_string(i) + "]")));

    lc.trials = static_cast<int>(int_field_or(config, "trials", 1, "config"));
    lc.budget = static_cast<int>(int_field_or(config, "budget", 200, "config"));
    lc.half_width = field_or(config, "half_width", 1.0, "config");
    lc.delta = field_or(config, "delta", 0.05, "config");
    lc.test_samples = static_cast<int>(int_field_or(config, "test_samples", 10000, "config"));

    int default_n = lc.target.compact ? lc.target.comp.n : lc.target.full.n;
    std::string default_tag = lc.target.compact ? lc.target.comp.tag.blocks
                                                : JordanTag::all_real(default_n).blocks;
    if (config.contains("hypothesis")) {
      const json& hyp = config.at("hypothesis");
      default_n = static_cast<int>(int_field_or(hyp, "n", default_n, "config.hypothesis"));
      default_tag = string_field_or(hyp, "jordan_tag", JordanTag::all_real(default_n).blocks,
                                    "config.hypothesis");
    }
    lc.hypothesis_n = default_n;
    lc.hypothesis_tag = JordanTag::parse(default_tag);

    const std::vector<LearnRow> rows = run_learning_experiment(lc);
    return {0, learn_rows_to_csv(rows), ""};
  } catch (const SchemaError& e) {
    return {2, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, "", e.what()};
  }
}

CliResult cmd_selftest(double perturb_closed_form) {
  const SelfTestResult result = run_selftest(perturb_closed_form);
  return {result.passed ? 0 : 1, result.report, result.passed ? "" : "selftest failed"};
}

}  // namespace vclab::cli
