#include "vclab/bounds.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <tuple>

namespace vclab {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kE = std::numbers::e;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

long long floor_log2_ll(unsigned long long x) {
  return static_cast<long long>(std::bit_width(x)) - 1;
}

long long ceil_log2_ll(unsigned long long x) {
  if (x <= 1) return 0;
  return static_cast<long long>(std::bit_width(x - 1));
}

// log2 of the s-count 2nk + 2(1+2k)^n without forming the power.
double log2_pole_terms(int n, long long k) {
  const double t_poles = 1.0 + n * std::log2(1.0 + 2.0 * static_cast<double>(k));
  const double t_linear = std::log2(2.0 * n * static_cast<double>(k));
  return log2_sum(t_linear, t_poles);
}

// Shared core of the scalar Goldberg-Jerrum style bounds:
//   factor * log2[ (8e * 2^extra_bits) * (8 m n^2 k (n + ell) + 1) * (2nk + 2(1+2k)^n) ].
double scalar_core(int n, int m, long long k, int ell_max, double factor, double extra_bits) {
  const double d_term =
      8.0 * m * static_cast<double>(n) * n * static_cast<double>(k) * (n + ell_max) + 1.0;
  const double log2_arg =
      std::log2(8.0 * kE) + extra_bits + std::log2(d_term) + log2_pole_terms(n, k);
  return factor * log2_arg;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double log2_sum(double la, double lb) {
  if (la < lb) std::swap(la, lb);
  return la + std::log1p(std::exp2(lb - la)) / kLn2;
}

double vc_upper_scalar(int n, int m, long long k, int ell_max) {
  require(n >= 1 && m >= 1 && k >= 1 && ell_max >= 0, "vc_upper_scalar: bad dimensions");
  const double factor = 2.0 * (2.0 * m * n * n + 4.0 * n + 1.0);
  return scalar_core(n, m, k, ell_max, factor, 0.0);
}

long long vc_lower(int n, long long k, RoundMode variant) {
  require(n >= 1 && k >= 1, "vc_lower: n, k must be >= 1");
  const long long mp = std::min<long long>(n, k);
  const unsigned long long q = static_cast<unsigned long long>(k / mp);
  const long long lg = variant == RoundMode::Floor ? floor_log2_ll(q) : ceil_log2_ll(q);
  return std::max(mp * lg, mp);
}

double vc_upper_vector(int n, int m, int p, long long k, int ell_max) {
  require(n >= 1 && m >= 1 && p >= 1 && k >= 1 && ell_max >= 0,
          "vc_upper_vector: bad dimensions");
  const double d_term =
      8.0 * m * static_cast<double>(n) * n * static_cast<double>(k) * (n + ell_max) + 1.0;
  const double t_outputs =
      p < 50 ? std::log2(std::exp2(static_cast<double>(p)) - 1.0) : static_cast<double>(p);
  const double t_poles = std::log2(2.0 * p) + n * std::log2(2.0 * static_cast<double>(k) + 1.0);
  const double t_linear = std::log2(2.0 * n * static_cast<double>(k));
  const double log2_arg = std::log2(8.0 * kE) + std::log2(d_term) +
                          log2_sum(log2_sum(t_outputs, t_poles), t_linear);
  const double factor = 2.0 * (2.0 * p * m * static_cast<double>(n) * n + 4.0 * n + p);
  return factor * log2_arg;
}

double pd_upper(int n, int m, long long k, int ell_max) {
  require(n >= 1 && m >= 1 && k >= 1 && ell_max >= 0, "pd_upper: bad dimensions");
  // Doubled polynomial degree contributes exactly one extra bit over the
  // VC-dimension core (16e in place of 8e).
  const double factor = 2.0 * (2.0 * m * n * n + 4.0 * n + 1.0);
  return scalar_core(n, m, k, ell_max, factor, 1.0);
}

FlaggedValue fat_lipschitz(long long k, double C, double L, double gamma, BallKind ball) {
  require(k >= 1, "fat_lipschitz: k must be >= 1");
  require(C > 0 && L > 0 && gamma > 0, "fat_lipschitz: C, L, gamma must be positive");
  const double ratio = C * L / gamma;
  switch (ball) {
    case BallKind::OpenInf: {
      const double x = std::floor(ratio);
      if (x <= 1.0) return {0.0, "floor_arg_le_1"};
      return {k * std::log2(x), ""};
    }
    case BallKind::ClosedInf:
      return {k * std::log2(1.0 + std::floor(ratio)), ""};
    case BallKind::ClosedL2:
      return {k * std::log2(C + L / gamma), ""};
  }
  throw std::logic_error("fat_lipschitz: unreachable");
}

FlaggedValue fat_control(int n, int m, double tau, double M, double gamma, RoundMode rounding) {
  require(n >= 1 && m >= 1, "fat_control: n, m must be >= 1");
  require(tau >= 1.0, "fat_control: tau must be >= 1");
  require(M > 0 && gamma > 0, "fat_control: M, gamma must be positive");
  const double factor = static_cast<double>(n) * (m + 1);
  const double arg =
      static_cast<double>(n) * n * m * std::pow(tau, n) * std::exp(tau) * M / gamma;
  if (!std::isfinite(arg) || arg > 9.007199254740992e15) {
    // Rounding is a sub-ulp effect out here; evaluate the log directly.
    const double log2_arg = 2.0 * std::log2(static_cast<double>(n)) + std::log2(m) +
                            n * std::log2(tau) + tau / kLn2 + std::log2(M) - std::log2(gamma);
    return {factor * log2_arg, "rounding_skipped_large_arg"};
  }
  const double rounded = rounding == RoundMode::Floor ? std::floor(arg) : std::ceil(arg);
  if (rounded < 1.0) return {0.0, "floor_arg_lt_1"};
  return {factor * std::log2(rounded), ""};
}

FlaggedValue fat_combined(const ProblemDims& dims, std::optional<double> gamma_override) {
  double gamma;
  std::string gamma_note;
  if (gamma_override) {
    gamma = *gamma_override;
    gamma_note = "gamma=supplied";
  } else {
    require(dims.kappa > 0 && dims.kappa < 0.25, "fat_combined: kappa must be in (0, 1/4)");
    require(dims.eps > 0 && dims.eps < 1, "fat_combined: eps must be in (0, 1)");
    gamma = (0.25 - dims.kappa) * dims.eps;
    gamma_note = "gamma=(1/4-kappa)*eps";
  }
  require(gamma > 0, "fat_combined: gamma must be positive");

  const FlaggedValue lip = fat_control(dims.n, dims.m, dims.tau,
                                       static_cast<double>(dims.k) * dims.M, gamma,
                                       RoundMode::Ceil);

  const double d_term = static_cast<double>(dims.n) * dims.m * static_cast<double>(dims.k) *
                            4.0 * (dims.n + dims.ell_max) +
                        1.0;
  const double pd_branch = 2.0 * (dims.m + 4.0) * dims.n *
                           (std::log2(8.0 * kE) + std::log2(d_term) +
                            log2_pole_terms(dims.n, dims.k));

  FlaggedValue out;
  out.value = std::min(lip.value, pd_branch);
  out.note = gamma_note + (lip.value <= pd_branch ? ";branch=lipschitz" : ";branch=dimension");
  if (!lip.note.empty()) out.note += ";" + lip.note;
  return out;
}

double fat_hyperplane(double R, double gamma, long long k) {
  require(R > 0 && gamma > 0, "fat_hyperplane: R, gamma must be positive");
  require(k >= 1, "fat_hyperplane: k must be >= 1");
  return std::min(9.0 * R * R / (gamma * gamma), static_cast<double>(k) + 1.0) + 1.0;
}

double sample_complexity_concept(double d, double eps, double delta) {
  require(d >= 1.0, "sample_complexity_concept: d must be >= 1");
  require(eps > 0 && eps < 1, "sample_complexity_concept: eps must be in (0, 1)");
  require(delta > 0 && delta < 1, "sample_complexity_concept: delta must be in (0, 1)");
  const double concept_term = (8.0 * d / eps) * std::log2(8.0 * kE / eps);
  const double confidence_term = (4.0 / eps) * std::log2(2.0 / delta);
  return std::max(concept_term, confidence_term);
}

FlaggedValue sample_complexity_agnostic(double d, double alpha, double delta) {
  require(d >= 0.0, "sample_complexity_agnostic: d must be >= 0");
  require(alpha > 0 && alpha < 1, "sample_complexity_agnostic: alpha must be in (0, 1)");
  require(delta > 0 && delta < 1, "sample_complexity_agnostic: delta must be in (0, 1)");
  const double ln7a = std::log(7.0 / alpha);
  const double inner = (336.0 * kE / (alpha * alpha * alpha * kLn2)) * ln7a;
  const double value =
      (4.0 / (alpha * alpha)) * ((6.0 * d / kLn2) * ln7a * inner + std::log(8.0 / delta));
  const double l2a = std::log2(1.0 / alpha);
  const double o_form = (1.0 / (alpha * alpha)) * (d * l2a * l2a + std::log2(1.0 / delta));
  return {value, "grouping=product-as-printed;o_form=" + fmt_double(o_form)};
}

double gj_bound(double ell, double d, double s) {
  require(ell >= 1 && d >= 1 && s >= 1, "gj_bound: ell, d, s must be >= 1");
  return 2.0 * ell * (std::log2(8.0 * kE) + std::log2(d) + std::log2(s));
}

double sign_pattern_count(int n_vars, double d, double m_polys) {
  require(n_vars >= 1 && d >= 1 && m_polys >= 1, "sign_pattern_count: inputs must be >= 1");
  if (static_cast<double>(n_vars) > m_polys)
    throw std::invalid_argument("sign_pattern_count: requires n_vars <= m_polys");
  const double log2_value = n_vars * std::log2(8.0 * kE * d * m_polys / n_vars);
  if (log2_value > 1023.0)
    throw std::range_error("sign_pattern_count: value exceeds double range");
  return std::exp2(log2_value);
}

unsigned long long pole_free_count(int n, long long k) {
  require(n >= 1 && k >= 1, "pole_free_count: n, k must be >= 1");
  const unsigned long long base = 1ULL + 2ULL * static_cast<unsigned long long>(k);
  unsigned long long acc = 1;
  for (int i = 0; i < n; ++i) {
    if (acc > std::numeric_limits<unsigned long long>::max() / base)
      throw std::range_error("pole_free_count: (1+2k)^n overflows 64-bit range");
    acc *= base;
  }
  return acc;
}

int dual_vc_lower(unsigned long long vc_dual) {
  require(vc_dual >= 1, "dual_vc_lower: vc_dual must be >= 1");
  return static_cast<int>(floor_log2_ll(vc_dual));
}

long long axis_shatter_bound(std::span<const long long> r) {
  long long total = 0;
  for (long long ri : r) {
    require(ri >= 1, "axis_shatter_bound: each r_i must be >= 1");
    total += floor_log2_ll(static_cast<unsigned long long>(ri));
  }
  return total;
}

long long dmax_rat(int n, int ell_max) {
  require(n >= 1 && ell_max >= 0, "dmax_rat: bad dimensions");
  return 4LL * (n + ell_max);
}

double rat_vc_abstract(int n, int m, long long k, double h_rat, double d_rat) {
  require(n >= 1 && m >= 1 && k >= 1 && h_rat >= 1 && d_rat >= 1,
          "rat_vc_abstract: inputs must be >= 1");
  const double n2k = 2.0 * static_cast<double>(n) * n * static_cast<double>(k);
  const double ell = 2.0 * m * static_cast<double>(n) * n + 4.0 * n;
  const double d = m * n2k * d_rat + 1.0;
  const double log2_s =
      log2_sum(1.0 + 4.0 * n * std::log2(8.0 * kE * d_rat * n2k * h_rat / (4.0 * n)),
               std::log2(n2k * h_rat));
  return 2.0 * ell * (std::log2(8.0 * kE) + std::log2(d) + log2_s);
}

unsigned long long xi_basis_count(int n, CountMode mode) {
  require(n >= 1, "xi_basis_count: n must be >= 1");
  const int half = n / 2;
  if (mode == CountMode::ClosedSum) {
    unsigned long long total = 0;
    for (int i = 1; i <= half; ++i)
      total += static_cast<unsigned long long>(n / (2 * i)) +
               static_cast<unsigned long long>(n / i);
    return total + static_cast<unsigned long long>(half) + 1;
  }

  // Literal construction: per complex-pair slot i the mode set holds cos and
  // sin entries up to power floor(n/2i)-1 plus a real tail of pure
  // exponentials continuing the cos powers up to floor(n/i)-1; then
  // floor(n/2)+1 singleton real slots. Elements are (power, slot, trig).
  std::set<std::tuple<int, int, int>> elems;
  for (int i = 1; i <= half; ++i) {
    for (int c = 0; c < n / (2 * i); ++c) {
      elems.insert({c, i, 0});
      elems.insert({c, i, 1});
    }
    for (int c = n / (2 * i); c < n / i; ++c) elems.insert({c, i, 0});
  }
  for (int j = 0; j <= half; ++j) elems.insert({0, half + 1 + j, 0});
  return elems.size();
}

}  // namespace vclab
