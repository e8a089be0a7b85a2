#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vclab/basis.hpp"

namespace vclab {

/// Indicator control number i of a family of k: in reversed time it is the
/// characteristic function of [2^-i, 2^-i + 2^alpha] with alpha = -2(k+1).
/// The width keeps all k intervals pairwise disjoint inside (0, 1].
struct IndicatorControl {
  int index = 1;    // i in [1..k_total]
  int k_total = 1;  // k

  IndicatorControl(int index_, int k_total_);

  double lower() const { return std::ldexp(1.0, -index); }
  double width() const { return std::ldexp(1.0, -2 * (k_total + 1)); }
  double upper() const { return lower() + width(); }
};

struct DichotomyPattern {
  std::uint32_t bits = 0;
  int len = 0;

  std::string str() const;  // point 0 is the leftmost character
};

/// Result of a shattering construction or search. Witnesses are keyed by the
/// realized pattern string and store whatever parameters reproduce it.
struct ShatterReport {
  std::string construction;
  std::string points;  // human-readable description of the tested point set
  int num_points = 0;
  std::uint64_t expected_patterns = 0;
  std::map<std::string, nlohmann::ordered_json> witnesses;
  bool complete = false;
  int indeterminate_count = 0;
  std::vector<std::string> notes;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

/// pi * sum_{i in J} 2^i for a subset J of [1..k]; bit i-1 of the mask marks i.
double section7_lambda(std::uint32_t subset_mask, int k);

struct Section7Output {
  double value = 0.0;
  bool indeterminate = false;
};

/// integral of sin(lambda t) over the control's interval, evaluated in the
/// cancellation-stable product form (2/lambda) sin(lambda (a+b)/2) sin(lambda (b-a)/2).
/// Results below guard_factor * eps * lambda * (b-a) are flagged indeterminate.
Section7Output section7_output(const IndicatorControl& ctrl, double lambda,
                               double guard_factor = 1e3);

/// Exhaustively maps all 2^k subsets to their k-bit sign patterns and reports
/// complete iff the map is a bijection onto {0,1}^k. k is limited to 8, the
/// range certified reliable in double precision; larger k is rejected.
ShatterReport verify_section7(int k, double guard_factor = 1e3);

/// h_j(lambda) = integral_0^1 e^(lambda t) omega_j(t) dt.
double h_transform(double lambda, const BasisFunction& omega);

struct LambdaSearchConfig {
  double range_lo = -10.0;
  double range_hi = 10.0;
  int attempts = 1000;
  double cond_threshold = 1e8;
  std::uint64_t seed = 0;
};

struct LambdaSearchResult {
  bool ok = false;
  std::vector<double> lambdas;
  double condition = 0.0;  // best condition number seen
  int attempts_used = 0;
};

/// Random search for lambda_1..lambda_k making [h_j(lambda_i)] well
/// conditioned. Deterministic given the seed; on failure the best condition
/// number found is reported.
LambdaSearchResult find_rank_k_lambdas(const BasisFamily& family, const LambdaSearchConfig& cfg);

/// Axis-shattering construction: partitions a rank-k lambda set into
/// min{n,k} blocks, interpolates every per-block dichotomy through the
/// h-transform system, and verifies realized signs over the full block grid.
ShatterReport axis_shatter_construct(int n, const BasisFamily& family,
                                     const LambdaSearchConfig& cfg);

enum class HyperplaneMode { KLeN, NLeK };

/// Hyperplane reductions realizing all 2^{min{n,k}} patterns on canonical
/// points: KLeN (k <= n) targets the control coordinates directly, NLeK
/// (n <= k) targets the transformed coordinates.
ShatterReport hyperplane_lower_witness(HyperplaneMode mode, int n, int k,
                                       const BasisFamily& family, const LambdaSearchConfig& cfg);

struct ParamSampler {
  int dim = 1;
  double half_width = 1.0;
  std::uint64_t seed = 0;
};

struct SignEvaluator {
  std::string name;
  std::function<int(std::span<const double> theta, std::span<const double> point)> eval;
};

/// Randomized certificate search for VC lower bounds: complete = true stores
/// witnesses and is a sound shattering certificate; false is inconclusive.
ShatterReport empirical_vc_lower(const SignEvaluator& evaluator,
                                 const std::vector<std::vector<double>>& points,
                                 const ParamSampler& sampler, long long budget);

struct RealEvaluator {
  std::string name;
  std::function<double(std::span<const double> theta, std::span<const double> point)> eval;
};

struct LevelSearchConfig {
  int levels_per_point = 9;
  long long max_combinations = 1LL << 20;
};

/// Joint search for per-point levels and parameters achieving margin gamma
/// on every bit pattern; complete = true certifies fat_gamma >= #points.
ShatterReport empirical_fat_lower(const RealEvaluator& evaluator,
                                  const std::vector<std::vector<double>>& points, double gamma,
                                  const LevelSearchConfig& levels, const ParamSampler& sampler,
                                  long long budget);

}  // namespace vclab
