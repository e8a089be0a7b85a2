#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vclab {

enum class BallKind { OpenInf, ClosedInf, ClosedL2 };
enum class RoundMode { Floor, Ceil };
enum class CountMode { ClosedSum, Enumerate };

/// Inputs shared by the dimension and sample-complexity calculators.
struct ProblemDims {
  int n = 1;           // state dimension
  int m = 1;           // input count
  int p = 1;           // output count
  long long k = 1;     // band-width (basis size)
  int ell_max = 0;     // max basis power
  double tau = 1.0;    // horizon, >= 1
  double M = 1.0;      // control mass bound
  double R = 1.0;      // norm radius
  double gamma = 0.1;  // margin, > 0
  double eps = 0.1;    // accuracy in (0, 1)
  double delta = 0.05; // confidence in (0, 1)
  double kappa = 0.1;  // margin split in (0, 1/4)
  double h_rat = 1.0;  // polynomial count in the abstract rationality condition
  double d_rat = 4.0;  // degree bound in the abstract rationality condition
};

/// Calculator output with an echo of the inputs actually used and any
/// branch/flag notes. value is real-valued as stated by the formulas;
/// ceil_value is provided for consumers that need an integer dimension.
struct BoundReport {
  std::string formula_id;
  double value = 0.0;
  double ceil_value = 0.0;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::string> notes;
};

struct FlaggedValue {
  double value = 0.0;
  std::string note;  // empty when no branch/flag applies
};

/// log2(2^la + 2^lb); evaluates log-of-product arguments without overflow.
double log2_sum(double la, double lb);

// Scalar sign-observation concept class bounds.
double vc_upper_scalar(int n, int m, long long k, int ell_max);
long long vc_lower(int n, long long k, RoundMode variant);
double vc_upper_vector(int n, int m, int p, long long k, int ell_max);
double pd_upper(int n, int m, long long k, int ell_max);

// Fat-shattering bounds.
FlaggedValue fat_lipschitz(long long k, double C, double L, double gamma, BallKind ball);
FlaggedValue fat_control(int n, int m, double tau, double M, double gamma, RoundMode rounding);
FlaggedValue fat_combined(const ProblemDims& dims, std::optional<double> gamma_override = {});
double fat_hyperplane(double R, double gamma, long long k);

// Sample complexity.
double sample_complexity_concept(double d, double eps, double delta);
FlaggedValue sample_complexity_agnostic(double d, double alpha, double delta);

// Polynomial-arrangement machinery.
double gj_bound(double ell, double d, double s);
double sign_pattern_count(int n_vars, double d, double m_polys);
unsigned long long pole_free_count(int n, long long k);
int dual_vc_lower(unsigned long long vc_dual);
long long axis_shatter_bound(std::span<const long long> r);
long long dmax_rat(int n, int ell_max);
double rat_vc_abstract(int n, int m, long long k, double h_rat, double d_rat);
unsigned long long xi_basis_count(int n, CountMode mode);

}  // namespace vclab
