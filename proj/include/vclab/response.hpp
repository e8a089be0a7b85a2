#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vclab/basis.hpp"

namespace vclab {

/// Control coefficient matrix G (m inputs x k basis weights); u = G omega.
struct ControlMatrix {
  int m = 0;
  int k = 0;
  std::vector<double> entries;  // row-major m x k

  ControlMatrix() = default;
  ControlMatrix(int m_, int k_, std::vector<double> e);
  static ControlMatrix scalar_row(std::vector<double> g);  // m = 1

  double operator()(int i, int j) const { return entries[static_cast<size_t>(i * k + j)]; }
  double& operator()(int i, int j) { return entries[static_cast<size_t>(i * k + j)]; }
};

/// Modal parameterization of the response map: per-output coefficients over
/// the 2n mode functions xi_1..xi_n = t^(0..n-1) e^(a t) cos(b t) and
/// xi_(n+1)..xi_(2n) = t^(0..n-1) e^(a t) sin(b t), one (a, b) pair per
/// eigen-table row, plus an additive offset.
///
/// Eigen-table rows store (a, b, e^a cos b, e^a sin b); the redundant last two
/// entries are kept as stated parameters and validated to 1e-9 consistency.
struct FullSystemParams {
  int m = 0;  // inputs
  int n = 0;  // state dimension
  int p = 0;  // outputs
  std::vector<double> coeffs;                    // [i][r][l][kappa], m x n x 2n x p
  std::vector<std::array<double, 4>> eigen_table;  // n rows
  std::vector<double> offset;                    // p

  FullSystemParams() = default;
  FullSystemParams(int m_, int n_, int p_, std::vector<double> coeffs_,
                   std::vector<std::array<double, 4>> eigen_table_, std::vector<double> offset_);

  static FullSystemParams zeros(int m, int n, int p);
  static std::array<double, 4> eigen_row(double a, double b);

  size_t coeff_index(int i, int r, int l, int kappa) const {
    return static_cast<size_t>(((i * n + r) * 2 * n + l) * p + kappa);
  }
  double coeff(int i, int r, int l, int kappa) const { return coeffs[coeff_index(i, r, l, kappa)]; }
  double& coeff(int i, int r, int l, int kappa) { return coeffs[coeff_index(i, r, l, kappa)]; }
};

/// How the n eigen-parameter slots split into real eigenvalues ('R', one
/// slot, one mode e^(a t)) and complex pairs ('C', two slots (a, b), two
/// modes e^(a t) cos(b t) and e^(a t) sin(b t)).
struct JordanTag {
  std::string blocks = "";  // e.g. "RR", "CR"

  static JordanTag all_real(int n) { return {std::string(static_cast<size_t>(n), 'R')}; }
  static JordanTag parse(const std::string& s);
  int slot_count() const;
};

/// Compact n(m+1)-parameter system of bounded norm: an m x n coefficient
/// matrix over the tag's n mode functions plus n eigen parameters, all
/// strictly inside the unit sup-norm ball. Scalar output, zero offset.
struct CompactSystemParams {
  int m = 0;
  int n = 0;
  std::vector<double> coeffs;        // row-major m x n
  std::vector<double> eigen_params;  // n
  JordanTag tag;

  CompactSystemParams() = default;
  CompactSystemParams(int m_, int n_, std::vector<double> coeffs_,
                      std::vector<double> eigen_params_, JordanTag tag_);
};

/// Embeds a compact system into the full parameterization (p = 1, zero offset).
FullSystemParams expand_compact(const CompactSystemParams& c);

struct ResponseDiagnostics {
  // (eigen row r, basis index j) pairs whose mode/basis integral hit the
  // degenerate-denominator branch; identifies the piecewise case in force.
  std::vector<std::pair<int, int>> degenerate_pairs;
};

/// Exact response y(tau): component kappa equals
///   offset_kappa + sum_{i,r,l,j} coeff(i,r,l,kappa) G(i,j)
///                  integral_0^tau xi_l(a_r, b_r, t) omega_j(t) dt.
std::vector<double> response_full(const FullSystemParams& params, const ControlMatrix& G,
                                  const BasisFamily& family, double tau,
                                  ResponseDiagnostics* diag = nullptr);

/// Coefficient vector (lambda_1(tau), ..., lambda_k(tau)) of the linear form
/// y(tau) = sum_j g_j lambda_j(tau) for scalar-input, scalar-output,
/// zero-offset systems.
std::vector<double> precompute_lambda_j(const FullSystemParams& params,
                                        const BasisFamily& family, double tau);
std::vector<double> precompute_lambda_j(const CompactSystemParams& params,
                                        const BasisFamily& family, double tau);

/// Componentwise sign observation: 0 if y <= 0, 1 if y > 0.
std::vector<int> sign_observe(std::span<const double> y);

/// Bounded squared-difference loss d^2 / (1 + d^2), d = z1 - z2.
double loss_eval(double z1, double z2);

/// Scalar control signal for simulation; breakpoints mark discontinuities so
/// the fixed-step integrator can align segment boundaries with them.
struct ControlSignal {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
};

/// Explicit state-space realization for the simulation oracle.
struct StateSpaceSim {
  Eigen::VectorXd x0;
  std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, double u)> rhs;
  std::function<double(const Eigen::VectorXd&)> output;
};

/// Classical fixed-step RK4 integration of xdot = rhs(t, x, u(t)) up to tau;
/// returns output(x(tau)). steps >= 100 required; global error O(steps^-4).
/// The step grid is laid piecewise between consecutive control breakpoints.
double oracle_rk4(const StateSpaceSim& sys, const ControlSignal& u, double tau, int steps);

/// Two-state oscillator x1' = x2, x2' = -lambda^2 x1 + u, y = -x1, x(0) = 0.
StateSpaceSim make_oscillator(double lambda);

}  // namespace vclab
