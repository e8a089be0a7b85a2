#include "vclab/selftest.hpp"

#include <cmath>
#include <string>

#include "vclab/bounds.hpp"
#include "vclab/expsin.hpp"
#include "vclab/rng.hpp"
#include "vclab/shatter.hpp"

namespace vclab {
namespace {

std::string describe_monomial(const ExpTrigMonomial& m, double tau) {
  return "K=" + std::to_string(m.power) + " a=" + std::to_string(m.rate) +
         " b=" + std::to_string(m.freq) + " " + to_string(m.phase) +
         " tau=" + std::to_string(tau);
}

}  // namespace

SelfTestResult run_selftest(double perturb_closed_form) {
  SelfTestResult result;
  result.passed = true;
  auto fail = [&](const std::string& line) {
    result.passed = false;
    result.report += "  FAIL " + line + "\n";
  };

  // Closed form vs quadrature on randomized monomials.
  {
    Rng rng(0x5e1f7e57u);
    int failures = 0;
    for (int c = 0; c < 1000; ++c) {
      ExpTrigMonomial m;
      m.power = static_cast<int>(rng.below(7));
      m.rate = rng.uniform(-5.0, 5.0);
      m.freq = rng.uniform(-5.0, 5.0);
      m.phase = rng.below(2) ? TrigKind::Sin : TrigKind::Cos;
      const double tau = rng.below(2) ? 1.0 : 2.0;

      const double closed = integrate_monomial(m, tau).value + perturb_closed_form;
      auto f = [&](double t) {
        const double trig =
            m.phase == TrigKind::Sin ? std::sin(m.freq * t) : std::cos(m.freq * t);
        return std::pow(t, m.power) * std::exp(m.rate * t) * trig;
      };
      const double quad = integrate_quadrature(f, tau, 1e-10);
      if (std::abs(closed - quad) > 1e-8 + 1e-6 * std::abs(quad)) {
        if (failures == 0)
          fail("oracle agreement: " + describe_monomial(m, tau) + " closed=" +
               std::to_string(closed) + " quadrature=" + std::to_string(quad));
        ++failures;
      }
    }
    result.report = std::string("closed-form oracle agreement (1000 cases): ") +
                    (failures == 0 ? "pass" : std::to_string(failures) + " failures") + "\n" +
                    result.report;
    if (failures > 0) result.passed = false;
  }

  // Lower bound never exceeds the upper bound on the desk-scale grid.
  {
    int failures = 0;
    for (int n = 1; n <= 6; ++n)
      for (long long k = 1; k <= 64; ++k)
        for (int ell = 0; ell <= 3; ++ell)
          for (RoundMode variant : {RoundMode::Floor, RoundMode::Ceil}) {
            const double lower = static_cast<double>(vc_lower(n, k, variant));
            const double upper = vc_upper_scalar(n, 1, k, ell);
            if (lower > upper) {
              if (failures == 0)
                fail("sandwich: n=" + std::to_string(n) + " k=" + std::to_string(k) +
                     " ell=" + std::to_string(ell));
              ++failures;
            }
          }
    result.report += std::string("bound sandwich grid (n<=6, k<=64, ell<=3): ") +
                     (failures == 0 ? "pass" : std::to_string(failures) + " failures") + "\n";
    if (failures > 0) result.passed = false;
  }

  // Exhaustive indicator-control verification.
  {
    bool ok = true;
    for (int k = 1; k <= 6; ++k) {
      const ShatterReport report = verify_section7(k);
      if (!report.complete || report.indeterminate_count != 0) {
        ok = false;
        fail("section7 k=" + std::to_string(k) + ": complete=" +
             (report.complete ? "true" : "false") + " indeterminate=" +
             std::to_string(report.indeterminate_count));
      }
    }
    result.report += std::string("section7 verification (k=1..6): ") + (ok ? "pass" : "fail") + "\n";
    if (!ok) result.passed = false;
  }

  return result;
}

}  // namespace vclab
