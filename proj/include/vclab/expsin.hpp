#pragma once

#include <functional>

#include "vclab/basis.hpp"

namespace vclab {

/// One integrand term t^K * e^(rate t) * sin/cos(freq t) on [0, tau].
struct ExpTrigMonomial {
  int power = 0;      // K >= 0
  double rate = 0.0;  // exponential rate
  double freq = 0.0;  // trigonometric frequency
  TrigKind phase = TrigKind::Cos;
};

enum class IntegralBranch { Regular, DegenerateDenominator };

/// The denominator rate^2 + freq^2 at or below this is treated as the
/// degenerate (pole) branch of the piecewise rational form.
inline constexpr double kDegenerateDenomThreshold = 1e-8;

struct IntegralResult {
  double value = 0.0;
  IntegralBranch branch = IntegralBranch::Regular;
  double denom_magnitude = 0.0;  // rate^2 + freq^2
};

/// Exact value of integral_0^tau t^K e^(a t) sin|cos(b t) dt.
///
/// The base case is the closed antiderivative on [0, tau]; higher powers use
/// the upward integration-by-parts recursion in K. For moderate |a + ib| tau
/// the same analytic value is evaluated through its power series, which is
/// the numerically stable route there. Exact pole a = b = 0 returns the
/// polynomial limit (0 for sin, tau^(K+1)/(K+1) for cos); near-degenerate
/// denominators fall back to the quadrature oracle.
///
/// Throws std::invalid_argument on non-finite input and std::range_error
/// when e^(a tau) or tau^(K+1) would overflow.
IntegralResult integrate_monomial(const ExpTrigMonomial& m, double tau);

struct XiBasisResult {
  double value = 0.0;
  bool degenerate = false;  // any constituent monomial on the degenerate branch
};

/// integral_0^tau t^l_xi e^(a t) trig(b t) * omega(t) dt via product-to-sum
/// expansion into at most two monomials (combined power l_xi + omega.ell,
/// rate a + omega.alpha, frequencies b -+ omega.beta, coefficients +-1/2).
XiBasisResult integrate_xi_times_basis_detail(int l_xi, double a, double b, TrigKind trig,
                                              const BasisFunction& omega, double tau);

double integrate_xi_times_basis(int l_xi, double a, double b, TrigKind trig,
                                const BasisFunction& omega, double tau);

/// Adaptive Gauss-Kronrod (G7, K15) quadrature of f on [0, tau] to the given
/// relative tolerance. Deterministic for fixed inputs. rel_tol must lie in
/// (0, 1e-2]. Throws std::runtime_error if the subdivision budget is
/// exhausted before convergence or the integrand is non-finite.
double integrate_quadrature(const std::function<double(double)>& f, double tau,
                            double rel_tol, int max_intervals = 2000);

}  // namespace vclab
