#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vclab/serialize.hpp"

namespace vclab {

/// Randomized-ERM identification experiment: draw labeled controls from a
/// target system, fit a compact-parameter hypothesis by best-of-budget
/// empirical error, measure test error on a fresh sample, and tabulate it
/// against the inverted concept-learning sample-complexity bound.
struct LearnConfig {
  SystemDescription target;  // scalar-input, scalar-output
  double tau = 1.0;
  std::vector<int> sizes;
  int trials = 1;
  std::uint64_t seed = 0;
  int budget = 200;          // hypothesis draws per trial
  double half_width = 1.0;   // controls ~ U[-half_width, half_width]^k
  double delta = 0.05;
  int test_samples = 10000;
  int hypothesis_n = 1;      // state dimension of the hypothesis class
  JordanTag hypothesis_tag = JordanTag::all_real(1);
};

struct LearnRow {
  int s = 0;
  int trial = 0;
  double test_error = 0.0;      // empirical estimate on test_samples fresh draws
  double test_half_width = 0.0; // 1.96 sqrt(e(1-e)/N) binomial half-width
  double train_error = 0.0;
  bool consistent = false;      // a zero-train-error hypothesis was found
  double bound_epsilon = 1.0;   // inverted concept bound at this sample size
};

/// Runs trials in parallel with per-(size, trial) derived seeds; the result
/// rows are sorted by (s, trial) and independent of scheduling.
std::vector<LearnRow> run_learning_experiment(const LearnConfig& config);

/// Frozen CSV: header s,trial,test_error,test_half_width,train_error,consistent,bound_epsilon
/// with LF line endings and 17-significant-digit reals.
std::string learn_rows_to_csv(const std::vector<LearnRow>& rows);

/// Smallest accuracy eps such that the concept-learning sample bound with VC
/// value d and confidence delta is at most s; capped at 1 when even eps -> 1
/// cannot reach s.
double invert_concept_bound(double d, long long s, double delta);

}  // namespace vclab
