#include "vclab/shatter.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "vclab/bounds.hpp"
#include "vclab/expsin.hpp"
#include "vclab/rng.hpp"

namespace vclab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Positive-label guard used when verifying interpolated sign patterns:
// interpolation targets are 0 or 1 with residuals <= 1e-8, so anything above
// this is a genuine 1-label and anything at or below it reads as 0.
constexpr double kSignGuard = 1e-6;

constexpr double kResidualLimit = 1e-8;

std::string pattern_string(std::uint32_t bits, int len) {
  std::string s(static_cast<size_t>(len), '0');
  for (int i = 0; i < len; ++i)
    if (bits & (1u << i)) s[static_cast<size_t>(i)] = '1';
  return s;
}

Eigen::MatrixXd h_matrix(std::span<const double> lambdas, const BasisFamily& family) {
  const int rows = static_cast<int>(lambdas.size());
  Eigen::MatrixXd H(rows, family.size());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < family.size(); ++j)
      H(i, j) = h_transform(lambdas[static_cast<size_t>(i)], family[j]);
  return H;
}

double condition_number(const Eigen::MatrixXd& M, int rank_needed) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  const double smallest = sv(rank_needed - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

// Draw `count` lambdas until the matrix [h_j(lambda_i)] reaches the wanted
// rank with acceptable conditioning.
LambdaSearchResult search_lambdas(const BasisFamily& family, const LambdaSearchConfig& cfg,
                                  int count, int rank_needed) {
  if (cfg.attempts < 1)
    throw std::invalid_argument("lambda search: attempts must be >= 1");
  if (!(cfg.range_hi >= cfg.range_lo))
    throw std::invalid_argument("lambda search: empty range");

  LambdaSearchResult best;
  best.condition = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < cfg.attempts; ++attempt) {
    Rng rng(derive_seed(cfg.seed, {0x11a, static_cast<std::uint64_t>(attempt)}));
    std::vector<double> lambdas(static_cast<size_t>(count));
    for (double& l : lambdas) l = rng.uniform(cfg.range_lo, cfg.range_hi);

    const double cond = condition_number(h_matrix(lambdas, family), rank_needed);
    if (cond < best.condition) {
      best.condition = cond;
      best.lambdas = lambdas;
    }
    best.attempts_used = attempt + 1;
    if (cond < cfg.cond_threshold) {
      best.ok = true;
      return best;
    }
  }
  best.ok = false;
  return best;
}

nlohmann::ordered_json vec_json(const std::vector<double>& v) {
  return nlohmann::ordered_json(v);
}

nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  return nlohmann::ordered_json(out);
}

}  // namespace

IndicatorControl::IndicatorControl(int index_, int k_total_) : index(index_), k_total(k_total_) {
  if (k_total < 1) throw std::invalid_argument("IndicatorControl: k_total must be >= 1");
  if (index < 1 || index > k_total)
    throw std::invalid_argument("IndicatorControl: index must lie in [1, k_total]");
}

std::string DichotomyPattern::str() const { return pattern_string(bits, len); }

nlohmann::ordered_json ShatterReport::to_json() const {
  nlohmann::ordered_json j;
  j["construction"] = construction;
  j["points"] = points;
  j["num_points"] = num_points;
  j["expected_patterns"] = expected_patterns;
  j["patterns_found"] = nlohmann::ordered_json::array();
  for (const auto& [pattern, witness] : witnesses) j["patterns_found"].push_back(pattern);
  j["complete"] = complete;
  j["indeterminate_count"] = indeterminate_count;
  j["witnesses"] = nlohmann::ordered_json::object();
  for (const auto& [pattern, witness] : witnesses) j["witnesses"][pattern] = witness;
  j["notes"] = notes;
  j["extra"] = extra;
  return j;
}

double section7_lambda(std::uint32_t subset_mask, int k) {
  if (k < 0 || k > 30) throw std::invalid_argument("section7_lambda: k out of range");
  double sum = 0.0;
  for (int i = 1; i <= k; ++i)
    if (subset_mask & (1u << (i - 1))) sum += std::ldexp(1.0, i);
  return kPi * sum;
}

Section7Output section7_output(const IndicatorControl& ctrl, double lambda,
                               double guard_factor) {
  if (lambda < 0.0) throw std::invalid_argument("section7_output: lambda must be >= 0");
  if (lambda == 0.0) return {0.0, false};
  const double a = ctrl.lower();
  const double w = ctrl.width();
  const double value = (2.0 / lambda) * std::sin(lambda * (a + 0.5 * w)) * std::sin(lambda * 0.5 * w);
  const bool indeterminate = std::abs(value) < guard_factor * kEps * lambda * w;
  return {value, indeterminate};
}

ShatterReport verify_section7(int k, double guard_factor) {
  if (k < 1)
    throw std::invalid_argument("verify_section7: k must be >= 1");
  if (k > 8)
    throw std::invalid_argument(
        "verify_section7: k exceeds the double-precision reliability limit (k <= 8)");

  ShatterReport report;
  report.construction = "section7";
  report.points = "indicator controls omega_1..omega_" + std::to_string(k);
  report.num_points = k;
  report.expected_patterns = 1ULL << k;

  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    const double lambda = section7_lambda(mask, k);
    std::uint32_t bits = 0;
    for (int i = 1; i <= k; ++i) {
      const Section7Output out = section7_output(IndicatorControl(i, k), lambda, guard_factor);
      if (out.indeterminate) ++report.indeterminate_count;
      if (out.value > 0.0) bits |= 1u << (i - 1);
    }
    const std::string pattern = pattern_string(bits, k);
    if (!report.witnesses.contains(pattern)) {
      nlohmann::ordered_json w;
      w["subset_mask"] = mask;
      nlohmann::ordered_json members = nlohmann::ordered_json::array();
      for (int i = 1; i <= k; ++i)
        if (mask & (1u << (i - 1))) members.push_back(i);
      w["J"] = members;
      w["lambda"] = lambda;
      report.witnesses[pattern] = w;
    }
  }

  report.complete = report.witnesses.size() == report.expected_patterns;
  report.extra["k"] = k;
  report.extra["bijection"] = report.complete;
  return report;
}

double h_transform(double lambda, const BasisFunction& omega) {
  return integrate_monomial({omega.ell, lambda + omega.alpha, omega.beta, omega.kind}, 1.0).value;
}

LambdaSearchResult find_rank_k_lambdas(const BasisFamily& family, const LambdaSearchConfig& cfg) {
  return search_lambdas(family, cfg, family.size(), family.size());
}

ShatterReport axis_shatter_construct(int n, const BasisFamily& family,
                                     const LambdaSearchConfig& cfg) {
  if (n < 1) throw std::invalid_argument("axis_shatter_construct: n must be >= 1");
  const int k = family.size();
  const int mprime = std::min(n, k);
  const int block = k / mprime;

  ShatterReport report;
  report.construction = "axis";
  report.num_points = block * mprime;
  report.expected_patterns = static_cast<std::uint64_t>(mprime) << block;
  report.points = std::to_string(mprime) + " blocks of " + std::to_string(block) +
                  " lambdas from a rank-" + std::to_string(k) + " set";

  if (std::pow(static_cast<double>(block), mprime) > 2e6)
    throw std::invalid_argument("axis_shatter_construct: verification grid too large");

  const LambdaSearchResult search = find_rank_k_lambdas(family, cfg);
  report.extra["condition"] = search.condition;
  report.extra["lambdas"] = vec_json(search.lambdas);
  if (!search.ok) {
    report.notes.push_back("lambda search failed; best condition " +
                           std::to_string(search.condition));
    return report;
  }

  const Eigen::MatrixXd H = h_matrix(search.lambdas, family);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(H);

  double max_residual = 0.0;
  int failures = 0;
  for (int s = 0; s < mprime; ++s) {
    for (std::uint32_t phi = 0; phi < (1u << block); ++phi) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
      for (int t = 0; t < block; ++t)
        if (phi & (1u << t)) rhs(s * block + t) = 1.0;

      const Eigen::VectorXd g = lu.solve(rhs);
      const Eigen::VectorXd realized = H * g;
      const double residual = (realized - rhs).lpNorm<Eigen::Infinity>();
      max_residual = std::max(max_residual, residual);
      if (residual > kResidualLimit) {
        ++failures;
        report.notes.push_back("axis " + std::to_string(s + 1) + " phi " +
                               pattern_string(phi, block) + ": residual " +
                               std::to_string(residual));
        continue;
      }

      // Verify the axis dichotomy over the whole grid L_1 x ... x L_m'.
      bool ok = true;
      std::vector<int> pick(static_cast<size_t>(mprime), 0);
      while (ok) {
        double value = 0.0;
        for (int axis = 0; axis < mprime; ++axis)
          value += realized(axis * block + pick[static_cast<size_t>(axis)]);
        const int label = value > kSignGuard ? 1 : 0;
        const int expected = (phi >> pick[static_cast<size_t>(s)]) & 1u;
        if (label != expected) {
          ok = false;
          break;
        }
        int axis = 0;
        for (; axis < mprime; ++axis) {
          if (++pick[static_cast<size_t>(axis)] < block) break;
          pick[static_cast<size_t>(axis)] = 0;
        }
        if (axis == mprime) break;
      }

      if (ok) {
        nlohmann::ordered_json w;
        w["axis"] = s + 1;
        w["phi"] = pattern_string(phi, block);
        w["g"] = vec_json(g);
        w["residual"] = residual;
        report.witnesses["axis" + std::to_string(s + 1) + ":" + pattern_string(phi, block)] = w;
      } else {
        ++failures;
      }
    }
  }

  report.complete = failures == 0 && report.witnesses.size() == report.expected_patterns;
  report.extra["max_residual"] = max_residual;
  std::vector<long long> sizes(static_cast<size_t>(mprime), block);
  report.extra["witness_value"] = axis_shatter_bound(sizes);
  return report;
}

ShatterReport hyperplane_lower_witness(HyperplaneMode mode, int n, int k,
                                       const BasisFamily& family, const LambdaSearchConfig& cfg) {
  if (n < 1 || k < 1) throw std::invalid_argument("hyperplane_lower_witness: n, k must be >= 1");
  if (family.size() != k)
    throw std::invalid_argument("hyperplane_lower_witness: family size must equal k");
  if (mode == HyperplaneMode::KLeN && k > n)
    throw std::invalid_argument("hyperplane_lower_witness: KLeN mode requires k <= n");
  if (mode == HyperplaneMode::NLeK && n > k)
    throw std::invalid_argument("hyperplane_lower_witness: NLeK mode requires n <= k");

  const int d = std::min(n, k);

  ShatterReport report;
  report.construction = mode == HyperplaneMode::KLeN ? "hyperplane-kln" : "hyperplane-nlk";
  report.num_points = d;
  report.expected_patterns = 1ULL << d;
  report.points = mode == HyperplaneMode::KLeN
                      ? "canonical controls e_1..e_" + std::to_string(k)
                      : std::to_string(n) + " controls interpolating transformed unit vectors";

  const LambdaSearchResult search = search_lambdas(family, cfg, n, d);
  report.extra["condition"] = search.condition;
  report.extra["lambdas"] = vec_json(search.lambdas);
  if (!search.ok) {
    report.notes.push_back("lambda search failed; best condition " +
                           std::to_string(search.condition));
    return report;
  }

  // Rows index lambdas (n of them), columns index basis functions (k).
  const Eigen::MatrixXd Ht = h_matrix(search.lambdas, family);
  double max_residual = 0.0;
  int failures = 0;

  if (mode == HyperplaneMode::KLeN) {
    // Points are the canonical controls e_j; realize any sign vector through
    // gamma_j = sum_i beta_i h_j(lambda_i) = (Ht^T beta)_j with targets +-1.
    const Eigen::MatrixXd M = Ht.transpose();  // k x n
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    for (std::uint32_t phi = 0; phi < (1u << d); ++phi) {
      Eigen::VectorXd target(k);
      for (int j = 0; j < k; ++j) target(j) = (phi >> j) & 1u ? 1.0 : -1.0;
      const Eigen::VectorXd beta = cod.solve(target);
      const Eigen::VectorXd realized = M * beta;
      const double residual = (realized - target).lpNorm<Eigen::Infinity>();
      max_residual = std::max(max_residual, residual);

      std::uint32_t bits = 0;
      for (int j = 0; j < k; ++j)
        if (realized(j) > 0.0) bits |= 1u << j;
      if (residual > kResidualLimit || bits != phi) {
        ++failures;
        report.notes.push_back("phi " + pattern_string(phi, d) + ": residual " +
                               std::to_string(residual));
        continue;
      }
      nlohmann::ordered_json w;
      w["beta"] = vec_json(beta);
      w["residual"] = residual;
      report.witnesses[pattern_string(phi, d)] = w;
    }
  } else {
    // Controls g^(rho) put the transformed coordinates at unit vectors; the
    // sign vector is then realized directly by beta with entries +-1.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Ht);  // n x k
    std::vector<Eigen::VectorXd> controls;
    std::vector<Eigen::VectorXd> transformed;
    nlohmann::ordered_json controls_json = nlohmann::ordered_json::array();
    for (int rho = 0; rho < n; ++rho) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, rho);
      const Eigen::VectorXd g = cod.solve(e);
      const Eigen::VectorXd tg = Ht * g;
      max_residual = std::max(max_residual, (tg - e).lpNorm<Eigen::Infinity>());
      controls.push_back(g);
      transformed.push_back(tg);
      controls_json.push_back(vec_json(g));
    }
    report.extra["controls"] = controls_json;
    if (max_residual > kResidualLimit) {
      report.notes.push_back("control interpolation residual " + std::to_string(max_residual));
      report.extra["max_residual"] = max_residual;
      return report;
    }

    for (std::uint32_t phi = 0; phi < (1u << d); ++phi) {
      Eigen::VectorXd beta(n);
      for (int rho = 0; rho < n; ++rho) beta(rho) = (phi >> rho) & 1u ? 1.0 : -1.0;
      std::uint32_t bits = 0;
      for (int rho = 0; rho < n; ++rho)
        if (beta.dot(transformed[static_cast<size_t>(rho)]) > 0.0) bits |= 1u << rho;
      if (bits != phi) {
        ++failures;
        continue;
      }
      nlohmann::ordered_json w;
      w["beta"] = vec_json(beta);
      report.witnesses[pattern_string(phi, d)] = w;
    }
  }

  report.extra["max_residual"] = max_residual;
  report.complete = failures == 0 && report.witnesses.size() == report.expected_patterns;
  return report;
}

ShatterReport empirical_vc_lower(const SignEvaluator& evaluator,
                                 const std::vector<std::vector<double>>& points,
                                 const ParamSampler& sampler, long long budget) {
  if (budget < 1) throw std::invalid_argument("empirical_vc_lower: budget must be >= 1");
  if (points.empty() || points.size() > 20)
    throw std::invalid_argument("empirical_vc_lower: need 1..20 points");
  if (sampler.dim < 1) throw std::invalid_argument("empirical_vc_lower: sampler dim must be >= 1");

  const int d = static_cast<int>(points.size());
  ShatterReport report;
  report.construction = "empirical-vc";
  report.points = std::to_string(d) + " fixed points, evaluator " + evaluator.name;
  report.num_points = d;
  report.expected_patterns = 1ULL << d;

  std::vector<double> theta(static_cast<size_t>(sampler.dim));
  long long used = 0;
  for (long long b = 0; b < budget; ++b) {
    Rng rng(derive_seed(sampler.seed, {0x7c, static_cast<std::uint64_t>(b)}));
    for (double& t : theta) t = rng.uniform(-sampler.half_width, sampler.half_width);

    std::uint32_t bits = 0;
    for (int x = 0; x < d; ++x)
      if (evaluator.eval(theta, points[static_cast<size_t>(x)]) != 0) bits |= 1u << x;

    const std::string pattern = pattern_string(bits, d);
    used = b + 1;
    if (!report.witnesses.contains(pattern)) {
      nlohmann::ordered_json w;
      w["theta"] = vec_json(theta);
      w["sample_index"] = b;
      report.witnesses[pattern] = w;
      if (report.witnesses.size() == report.expected_patterns) break;
    }
  }

  report.complete = report.witnesses.size() == report.expected_patterns;
  report.extra["budget_used"] = used;
  if (!report.complete) report.notes.push_back("inconclusive: search exhausted budget");
  return report;
}

ShatterReport empirical_fat_lower(const RealEvaluator& evaluator,
                                  const std::vector<std::vector<double>>& points, double gamma,
                                  const LevelSearchConfig& levels, const ParamSampler& sampler,
                                  long long budget) {
  if (budget < 1) throw std::invalid_argument("empirical_fat_lower: budget must be >= 1");
  if (!(gamma > 0)) throw std::invalid_argument("empirical_fat_lower: gamma must be positive");
  if (points.empty() || points.size() > 20)
    throw std::invalid_argument("empirical_fat_lower: need 1..20 points");
  if (levels.levels_per_point < 1)
    throw std::invalid_argument("empirical_fat_lower: levels_per_point must be >= 1");

  const int d = static_cast<int>(points.size());
  const int L = levels.levels_per_point;
  double combos = 1.0;
  for (int x = 0; x < d; ++x) combos *= L;
  if (combos > static_cast<double>(levels.max_combinations))
    throw std::invalid_argument("empirical_fat_lower: level grid exceeds max_combinations");

  ShatterReport report;
  report.construction = "empirical-fat";
  report.points = std::to_string(d) + " fixed points, evaluator " + evaluator.name +
                  ", gamma " + std::to_string(gamma);
  report.num_points = d;
  report.expected_patterns = 1ULL << d;

  // Evaluate the whole sample once.
  std::vector<std::vector<double>> values(static_cast<size_t>(budget));
  std::vector<std::vector<double>> thetas(static_cast<size_t>(budget));
  for (long long b = 0; b < budget; ++b) {
    Rng rng(derive_seed(sampler.seed, {0xfa, static_cast<std::uint64_t>(b)}));
    std::vector<double> theta(static_cast<size_t>(sampler.dim));
    for (double& t : theta) t = rng.uniform(-sampler.half_width, sampler.half_width);
    std::vector<double> row(static_cast<size_t>(d));
    for (int x = 0; x < d; ++x) row[static_cast<size_t>(x)] = evaluator.eval(theta, points[static_cast<size_t>(x)]);
    values[static_cast<size_t>(b)] = std::move(row);
    thetas[static_cast<size_t>(b)] = std::move(theta);
  }

  std::vector<double> lo(static_cast<size_t>(d), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<size_t>(d), -std::numeric_limits<double>::infinity());
  for (const auto& row : values)
    for (int x = 0; x < d; ++x) {
      lo[static_cast<size_t>(x)] = std::min(lo[static_cast<size_t>(x)], row[static_cast<size_t>(x)]);
      hi[static_cast<size_t>(x)] = std::max(hi[static_cast<size_t>(x)], row[static_cast<size_t>(x)]);
    }

  auto level_at = [&](int x, int idx) {
    return lo[static_cast<size_t>(x)] +
           (hi[static_cast<size_t>(x)] - lo[static_cast<size_t>(x)]) * (idx + 1) / (L + 1);
  };

  // Odometer over the level grid; first full coverage wins.
  std::vector<int> pick(static_cast<size_t>(d), 0);
  while (true) {
    std::map<std::string, long long> coverage;
    for (long long b = 0; b < budget; ++b) {
      std::uint32_t bits = 0;
      bool valid = true;
      for (int x = 0; x < d && valid; ++x) {
        const double r = level_at(x, pick[static_cast<size_t>(x)]);
        const double v = values[static_cast<size_t>(b)][static_cast<size_t>(x)];
        if (v >= r + gamma)
          bits |= 1u << x;
        else if (!(v <= r - gamma))
          valid = false;
      }
      if (!valid) continue;
      coverage.emplace(pattern_string(bits, d), b);
      if (coverage.size() == report.expected_patterns) break;
    }

    if (coverage.size() == report.expected_patterns) {
      nlohmann::ordered_json level_json = nlohmann::ordered_json::array();
      for (int x = 0; x < d; ++x) level_json.push_back(level_at(x, pick[static_cast<size_t>(x)]));
      for (const auto& [pattern, b] : coverage) {
        nlohmann::ordered_json w;
        w["theta"] = vec_json(thetas[static_cast<size_t>(b)]);
        w["sample_index"] = b;
        report.witnesses[pattern] = w;
      }
      report.complete = true;
      report.extra["levels"] = level_json;
      return report;
    }

    int x = 0;
    for (; x < d; ++x) {
      if (++pick[static_cast<size_t>(x)] < L) break;
      pick[static_cast<size_t>(x)] = 0;
    }
    if (x == d) break;
  }

  report.complete = false;
  report.notes.push_back("inconclusive: no level assignment covers all patterns");
  return report;
}

}  // namespace vclab
