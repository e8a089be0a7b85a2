#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vclab/expsin.hpp"
#include "vclab/rng.hpp"

using namespace vclab;
using std::numbers::e;
using std::numbers::pi;

namespace {

double quad_of_monomial(const ExpTrigMonomial& m, double tau, double rel_tol = 1e-10) {
  return integrate_quadrature(
      [&](double t) {
        const double trig = m.phase == TrigKind::Sin ? std::sin(m.freq * t) : std::cos(m.freq * t);
        return std::pow(t, m.power) * std::exp(m.rate * t) * trig;
      },
      tau, rel_tol);
}

}  // namespace

TEST_CASE("monomial base cases") {
  CHECK(integrate_monomial({0, 0.0, pi, TrigKind::Sin}, 1.0).value == doctest::Approx(2.0 / pi).epsilon(1e-12));
  CHECK(integrate_monomial({0, 0.0, 0.0, TrigKind::Sin}, 1.0).value == 0.0);
  CHECK(integrate_monomial({1, 0.0, pi, TrigKind::Sin}, 1.0).value == doctest::Approx(1.0 / pi).epsilon(1e-12));
  // closed antiderivative at a = b = 1: (e (sin 1 - cos 1) + 1) / 2
  const double expected = (e * (std::sin(1.0) - std::cos(1.0)) + 1.0) / 2.0;
  const double got = integrate_monomial({0, 1.0, 1.0, TrigKind::Sin}, 1.0).value;
  CHECK(got == doctest::Approx(expected).epsilon(1e-13));
  CHECK(got == doctest::Approx(quad_of_monomial({0, 1.0, 1.0, TrigKind::Sin}, 1.0)).epsilon(1e-10));
}

TEST_CASE("degenerate branches") {
  const IntegralResult zero_sin = integrate_monomial({3, 0.0, 0.0, TrigKind::Sin}, 2.0);
  CHECK(zero_sin.branch == IntegralBranch::DegenerateDenominator);
  CHECK(zero_sin.value == 0.0);

  const IntegralResult zero_cos = integrate_monomial({3, 0.0, 0.0, TrigKind::Cos}, 2.0);
  CHECK(zero_cos.branch == IntegralBranch::DegenerateDenominator);
  CHECK(zero_cos.value == doctest::Approx(std::pow(2.0, 4) / 4.0).epsilon(1e-14));

  // Near-degenerate inputs divert to quadrature but stay accurate.
  const ExpTrigMonomial near{2, 5e-5, 5e-5, TrigKind::Cos};
  const IntegralResult r = integrate_monomial(near, 1.0);
  CHECK(r.branch == IntegralBranch::DegenerateDenominator);
  CHECK(r.denom_magnitude <= kDegenerateDenomThreshold);
  CHECK(r.value == doctest::Approx(quad_of_monomial(near, 1.0)).epsilon(1e-10));

  const IntegralResult regular = integrate_monomial({0, 1.0, 1.0, TrigKind::Sin}, 1.0);
  CHECK(regular.branch == IntegralBranch::Regular);
  CHECK(regular.denom_magnitude == doctest::Approx(2.0));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(integrate_monomial({-1, 0.0, 1.0, TrigKind::Sin}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_monomial({0, std::nan(""), 1.0, TrigKind::Sin}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_monomial({0, 1.0, 1.0, TrigKind::Sin}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_monomial({0, 1.0, 1.0, TrigKind::Sin}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_monomial({0, 800.0, 1.0, TrigKind::Sin}, 1.0), std::range_error);
}

TEST_CASE("oracle agreement on randomized monomials") {
  Rng rng(0xabcdef12u);
  for (int c = 0; c < 1000; ++c) {
    ExpTrigMonomial m;
    m.power = static_cast<int>(rng.below(7));
    m.rate = rng.uniform(-5.0, 5.0);
    m.freq = rng.uniform(-5.0, 5.0);
    m.phase = rng.below(2) ? TrigKind::Sin : TrigKind::Cos;
    const double tau = rng.below(2) ? 1.0 : 2.0;
    const double closed = integrate_monomial(m, tau).value;
    const double quad = quad_of_monomial(m, tau);
    REQUIRE(std::abs(closed - quad) <= 1e-8 + 1e-6 * std::abs(quad));
  }
}

TEST_CASE("parity in the frequency") {
  Rng rng(0x9177u);
  for (int c = 0; c < 200; ++c) {
    const int K = static_cast<int>(rng.below(5));
    const double a = rng.uniform(-4.0, 4.0);
    const double b = rng.uniform(0.05, 5.0);
    const double tau = rng.uniform(0.5, 2.0);
    const double s_pos = integrate_monomial({K, a, b, TrigKind::Sin}, tau).value;
    const double s_neg = integrate_monomial({K, a, -b, TrigKind::Sin}, tau).value;
    const double c_pos = integrate_monomial({K, a, b, TrigKind::Cos}, tau).value;
    const double c_neg = integrate_monomial({K, a, -b, TrigKind::Cos}, tau).value;
    REQUIRE(std::abs(s_pos + s_neg) <= 1e-12 * (1.0 + std::abs(s_pos)));
    REQUIRE(std::abs(c_pos - c_neg) <= 1e-12 * (1.0 + std::abs(c_pos)));
  }
}

TEST_CASE("recursion consistency against an independent re-evaluation") {
  Rng rng(0x7e57u);
  for (int c = 0; c < 300; ++c) {
    const int K = 1 + static_cast<int>(rng.below(6));
    double a = rng.uniform(-4.0, 4.0);
    double b = rng.uniform(-4.0, 4.0);
    if (a * a + b * b < 0.25) a += 1.0;  // keep clear of the degenerate region
    const double tau = rng.uniform(0.8, 2.0);
    const double denom = a * a + b * b;

    const double s_prev = integrate_monomial({K - 1, a, b, TrigKind::Sin}, tau).value;
    const double c_prev = integrate_monomial({K - 1, a, b, TrigKind::Cos}, tau).value;
    const double tau_pow = std::pow(tau, K);
    const double ea = std::exp(a * tau);

    const double s_expected =
        tau_pow * ea * (a * std::sin(b * tau) - b * std::cos(b * tau)) / denom -
        (K / denom) * (a * s_prev - b * c_prev);
    const double c_expected =
        tau_pow * ea * (a * std::cos(b * tau) + b * std::sin(b * tau)) / denom -
        (K / denom) * (a * c_prev + b * s_prev);

    const double s_direct = integrate_monomial({K, a, b, TrigKind::Sin}, tau).value;
    const double c_direct = integrate_monomial({K, a, b, TrigKind::Cos}, tau).value;
    REQUIRE(std::abs(s_direct - s_expected) <= 1e-10 * (1.0 + std::abs(s_direct)));
    REQUIRE(std::abs(c_direct - c_expected) <= 1e-10 * (1.0 + std::abs(c_direct)));
  }
}

TEST_CASE("xi times basis expansion") {
  const BasisFunction sin_pi{0, 0.0, pi, TrigKind::Sin};
  CHECK(integrate_xi_times_basis(0, 0.0, pi, TrigKind::Sin, sin_pi, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // sin(0 t) factor kills the product exactly.
  const BasisFunction arbitrary{2, 0.7, 3.1, TrigKind::Cos};
  CHECK(integrate_xi_times_basis(0, 0.0, 0.0, TrigKind::Sin, arbitrary, 1.0) ==
        doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));

  // Cross-check against quadrature on a generic pair.
  const BasisFunction omega{1, -0.4, 2.2, TrigKind::Cos};
  const double got = integrate_xi_times_basis(2, 0.6, 1.3, TrigKind::Sin, omega, 1.5);
  const double quad = integrate_quadrature(
      [&](double t) { return t * t * std::exp(0.6 * t) * std::sin(1.3 * t) * omega(t); }, 1.5,
      1e-11);
  CHECK(got == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("product branch structure for sin basis times sin mode") {
  // omega = sin(c t); the b = +-c lines are the degenerate cases and carry
  // the squared-sine values; everything else is regular.
  const double c = 2.0;
  const BasisFunction omega{0, 0.0, c, TrigKind::Sin};

  const XiBasisResult regular = integrate_xi_times_basis_detail(0, 0.3, 1.0, TrigKind::Sin, omega, 1.0);
  CHECK_FALSE(regular.degenerate);

  const XiBasisResult at_c = integrate_xi_times_basis_detail(0, 0.0, c, TrigKind::Sin, omega, 1.0);
  CHECK(at_c.degenerate);
  // integral of sin^2(c t) = (c - sin c cos c) / (2c)
  CHECK(at_c.value ==
        doctest::Approx((c - std::sin(c) * std::cos(c)) / (2.0 * c)).epsilon(1e-10));

  const XiBasisResult at_minus_c =
      integrate_xi_times_basis_detail(0, 0.0, -c, TrigKind::Sin, omega, 1.0);
  CHECK(at_minus_c.degenerate);
  CHECK(at_minus_c.value ==
        doctest::Approx((std::sin(c) * std::cos(c) - c) / (2.0 * c)).epsilon(1e-10));

  // Quadrature arbitrates each branch value.
  for (double b : {1.0, c, -c}) {
    const double quad = integrate_quadrature(
        [&](double t) { return std::sin(b * t) * std::sin(c * t); }, 1.0, 1e-11);
    const double got = integrate_xi_times_basis(0, 0.0, b, TrigKind::Sin, omega, 1.0);
    REQUIRE(got == doctest::Approx(quad).epsilon(1e-9));
  }
}

TEST_CASE("linearity in a scalar multiple of the basis function") {
  Rng rng(0x11bb22u);
  for (int c = 0; c < 50; ++c) {
    const BasisFunction omega{static_cast<int>(rng.below(3)), rng.uniform(-2, 2),
                              rng.uniform(0.1, 4.0), rng.below(2) ? TrigKind::Sin : TrigKind::Cos};
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    const double base = integrate_xi_times_basis(1, a, b, TrigKind::Cos, omega, 1.0);
    // Scaling the implicit coefficient of omega scales the integral: compare
    // against the quadrature of 3 * xi * omega.
    const double scaled = integrate_quadrature(
        [&](double t) { return 3.0 * t * std::exp(a * t) * std::cos(b * t) * omega(t); }, 1.0,
        1e-11);
    REQUIRE(3.0 * base == doctest::Approx(scaled).epsilon(5e-8));
  }
}

TEST_CASE("quadrature oracle basics") {
  CHECK(integrate_quadrature([](double) { return 1.0; }, 1.0, 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate_quadrature([](double t) { return std::sin(pi * t); }, 1.0, 1e-10) ==
        doctest::Approx(2.0 / pi).epsilon(1e-10));
  const double closed = integrate_monomial({1, 1.0, 3.0, TrigKind::Sin}, 1.0).value;
  CHECK(integrate_quadrature([](double t) { return t * std::exp(t) * std::sin(3.0 * t); }, 1.0,
                             1e-11) == doctest::Approx(closed).epsilon(1e-10));

  CHECK_THROWS_AS(integrate_quadrature([](double) { return 1.0; }, 1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_quadrature([](double) { return 1.0; }, -1.0, 1e-6),
                  std::invalid_argument);
  // A needle the budget cannot resolve is reported, not silently returned.
  CHECK_THROWS_AS(integrate_quadrature(
                      [](double t) { return std::sin(1.0 / (1e-300 + std::abs(t - 0.37))); }, 1.0,
                      1e-10, 8),
                  std::runtime_error);
}
