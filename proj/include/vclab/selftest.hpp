#pragma once

#include <string>

namespace vclab {

struct SelfTestResult {
  bool passed = false;
  std::string report;  // one line per suite plus failure details
};

/// Built-in diagnostic: closed-form/quadrature agreement on 1000 randomized
/// monomials, the lower/upper bound sandwich grid, and exhaustive
/// verification of the indicator-control construction for k <= 6.
/// perturb_closed_form shifts every closed-form value by that amount before
/// comparison; nonzero values exist so tests can confirm the suite detects
/// mutations.
SelfTestResult run_selftest(double perturb_closed_form = 0.0);

}  // namespace vclab
