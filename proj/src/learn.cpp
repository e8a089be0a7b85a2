#include "vclab/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "vclab/bounds.hpp"
#include "vclab/rng.hpp"

namespace vclab {
namespace {

double sample_open_unit(Rng& rng) {
  double v;
  do {
    v = rng.uniform(-1.0, 1.0);
  } while (!(v > -1.0 && v < 1.0));
  return v;
}

int label_of(const std::vector<double>& g, const std::vector<double>& lambda) {
  double acc = 0.0;
  for (size_t j = 0; j < g.size(); ++j) acc += g[j] * lambda[j];
  return acc > 0.0 ? 1 : 0;
}

std::vector<double> draw_control(Rng& rng, int k, double half_width) {
  std::vector<double> g(static_cast<size_t>(k));
  for (double& v : g) v = rng.uniform(-half_width, half_width);
  return g;
}

}  // namespace

double invert_concept_bound(double d, long long s, double delta) {
  const double eps_hi = 1.0 - 1e-12;
  if (sample_complexity_concept(d, eps_hi, delta) > static_cast<double>(s)) return 1.0;
  double lo = 1e-12, hi = eps_hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sample_complexity_concept(d, mid, delta) <= static_cast<double>(s))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<LearnRow> run_learning_experiment(const LearnConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("learn: sizes must be nonempty");
  for (int s : config.sizes)
    if (s < 1) throw std::invalid_argument("learn: sample sizes must be >= 1");
  if (config.trials < 1) throw std::invalid_argument("learn: trials must be >= 1");
  if (config.budget < 1) throw std::invalid_argument("learn: budget must be >= 1");
  if (config.test_samples < 1) throw std::invalid_argument("learn: test_samples must be >= 1");
  if (!(config.half_width > 0)) throw std::invalid_argument("learn: half_width must be positive");
  if (!(config.delta > 0 && config.delta < 1))
    throw std::invalid_argument("learn: delta must be in (0, 1)");
  if (config.hypothesis_n < 1) throw std::invalid_argument("learn: hypothesis_n must be >= 1");
  if (config.hypothesis_tag.slot_count() != config.hypothesis_n)
    throw std::invalid_argument("learn: hypothesis jordan tag does not cover hypothesis_n slots");
  if (!(config.tau > 0)) throw std::invalid_argument("learn: tau must be positive");

  const BasisFamily& family = config.target.family;
  const int k = family.size();
  const int n = config.hypothesis_n;
  const std::vector<double> target_lambda = config.target.lambda_vector(config.tau);

  const double d_vc = vc_upper_scalar(n, 1, k, family.ell_max());

  std::vector<int> sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<double> bound_eps(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i)
    bound_eps[i] = invert_concept_bound(d_vc, sizes[i], config.delta);

  const size_t tasks = sizes.size() * static_cast<size_t>(config.trials);
  std::vector<LearnRow> rows(tasks);

  auto run_task = [&](size_t task) {
    const size_t size_idx = task / static_cast<size_t>(config.trials);
    const int trial = static_cast<int>(task % static_cast<size_t>(config.trials));
    const int s = sizes[size_idx];
    const std::uint64_t su = static_cast<std::uint64_t>(s);
    const std::uint64_t tu = static_cast<std::uint64_t>(trial);

    // Training sample.
    Rng train_rng(derive_seed(config.seed, {1, su, tu}));
    std::vector<std::vector<double>> train(static_cast<size_t>(s));
    std::vector<int> labels(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
      train[static_cast<size_t>(i)] = draw_control(train_rng, k, config.half_width);
      labels[static_cast<size_t>(i)] = label_of(train[static_cast<size_t>(i)], target_lambda);
    }

    // Best-of-budget randomized ERM over compact hypotheses.
    Rng cand_rng(derive_seed(config.seed, {2, su, tu}));
    std::vector<double> best_lambda;
    int best_mistakes = s + 1;
    for (int c = 0; c < config.budget && best_mistakes > 0; ++c) {
      std::vector<double> coeffs(static_cast<size_t>(n));
      std::vector<double> eigen(static_cast<size_t>(n));
      for (double& v : coeffs) v = sample_open_unit(cand_rng);
      for (double& v : eigen) v = sample_open_unit(cand_rng);
      const CompactSystemParams hyp(1, n, std::move(coeffs), std::move(eigen),
                                    config.hypothesis_tag);
      std::vector<double> lambda = precompute_lambda_j(hyp, family, config.tau);
      int mistakes = 0;
      for (int i = 0; i < s && mistakes < best_mistakes; ++i)
        mistakes += label_of(train[static_cast<size_t>(i)], lambda) != labels[static_cast<size_t>(i)];
      if (mistakes < best_mistakes) {
        best_mistakes = mistakes;
        best_lambda = std::move(lambda);
      }
    }

    // Fresh-sample test error.
    Rng test_rng(derive_seed(config.seed, {3, su, tu}));
    long long wrong = 0;
    for (int i = 0; i < config.test_samples; ++i) {
      const std::vector<double> g = draw_control(test_rng, k, config.half_width);
      wrong += label_of(g, best_lambda) != label_of(g, target_lambda);
    }
    const double test_error = static_cast<double>(wrong) / config.test_samples;

    LearnRow row;
    row.s = s;
    row.trial = trial;
    row.test_error = test_error;
    row.test_half_width =
        1.96 * std::sqrt(test_error * (1.0 - test_error) / config.test_samples);
    row.train_error = static_cast<double>(best_mistakes) / s;
    row.consistent = best_mistakes == 0;
    row.bound_epsilon = bound_eps[size_idx];
    rows[task] = row;
  };

  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
  if (workers <= 1 || tasks <= 1) {
    for (size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.push_back(std::async(std::launch::async, [&] {
        for (size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) run_task(t);
      }));
    for (auto& f : pool) f.get();
  }
  return rows;
}

std::string learn_rows_to_csv(const std::vector<LearnRow>& rows) {
  std::string out = "s,trial,test_error,test_half_width,train_error,consistent,bound_epsilon\n";
  for (const LearnRow& r : rows) {
    out += std::to_string(r.s) + "," + std::to_string(r.trial) + "," + format_real(r.test_error) +
           "," + format_real(r.test_half_width) + "," + format_real(r.train_error) + "," +
           (r.consistent ? "1" : "0") + "," + format_real(r.bound_epsilon) + "\n";
  }
  return out;
}

}  // namespace vclab
