#include "vclab/response.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "vclab/expsin.hpp"

namespace vclab {

ControlMatrix::ControlMatrix(int m_, int k_, std::vector<double> e)
    : m(m_), k(k_), entries(std::move(e)) {
  if (m < 1 || k < 1) throw std::invalid_argument("ControlMatrix: dimensions must be positive");
  if (entries.size() != static_cast<size_t>(m) * static_cast<size_t>(k))
    throw std::invalid_argument("ControlMatrix: entry count does not match m*k");
  for (double v : entries)
    if (!std::isfinite(v)) throw std::invalid_argument("ControlMatrix: non-finite entry");
}

ControlMatrix ControlMatrix::scalar_row(std::vector<double> g) {
  const int k = static_cast<int>(g.size());
  return ControlMatrix(1, k, std::move(g));
}

FullSystemParams::FullSystemParams(int m_, int n_, int p_, std::vector<double> coeffs_,
                                   std::vector<std::array<double, 4>> eigen_table_,
                                   std::vector<double> offset_)
    : m(m_), n(n_), p(p_), coeffs(std::move(coeffs_)), eigen_table(std::move(eigen_table_)),
      offset(std::move(offset_)) {
  if (m < 1 || n < 1 || p < 1)
    throw std::invalid_argument("FullSystemParams: dimensions must be positive");
  const size_t want = static_cast<size_t>(m) * n * 2 * n * p;
  if (coeffs.size() != want)
    throw std::invalid_argument("FullSystemParams: coeff tensor size mismatch");
  if (eigen_table.size() != static_cast<size_t>(n))
    throw std::invalid_argument("FullSystemParams: eigen table must have n rows");
  if (offset.size() != static_cast<size_t>(p))
    throw std::invalid_argument("FullSystemParams: offset length must be p");
  for (const auto& row : eigen_table) {
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("FullSystemParams: non-finite eigen entry");
    const double ea = std::exp(row[0]);
    if (std::abs(row[2] - ea * std::cos(row[1])) > 1e-9 ||
        std::abs(row[3] - ea * std::sin(row[1])) > 1e-9)
      throw std::invalid_argument(
          "FullSystemParams: eigen row inconsistent with (a, b, e^a cos b, e^a sin b)");
  }
  for (double v : coeffs)
    if (!std::isfinite(v)) throw std::invalid_argument("FullSystemParams: non-finite coefficient");
  for (double v : offset)
    if (!std::isfinite(v)) throw std::invalid_argument("FullSystemParams: non-finite offset");
}

FullSystemParams FullSystemParams::zeros(int m, int n, int p) {
  std::vector<std::array<double, 4>> rows(static_cast<size_t>(n), eigen_row(0.0, 0.0));
  return FullSystemParams(m, n, p,
                          std::vector<double>(static_cast<size_t>(m) * n * 2 * n * p, 0.0),
                          std::move(rows), std::vector<double>(static_cast<size_t>(p), 0.0));
}

std::array<double, 4> FullSystemParams::eigen_row(double a, double b) {
  const double ea = std::exp(a);
  return {a, b, ea * std::cos(b), ea * std::sin(b)};
}

JordanTag JordanTag::parse(const std::string& s) {
  for (char c : s)
    if (c != 'R' && c != 'C')
      throw std::invalid_argument("JordanTag: blocks must be 'R' or 'C', got '" + s + "'");
  if (s.empty()) throw std::invalid_argument("JordanTag: empty tag");
  return {s};
}

int JordanTag::slot_count() const {
  int n = 0;
  for (char c : blocks) n += c == 'C' ? 2 : 1;
  return n;
}

CompactSystemParams::CompactSystemParams(int m_, int n_, std::vector<double> coeffs_,
                                         std::vector<double> eigen_params_, JordanTag tag_)
    : m(m_), n(n_), coeffs(std::move(coeffs_)), eigen_params(std::move(eigen_params_)),
      tag(std::move(tag_)) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("CompactSystemParams: dimensions must be positive");
  if (coeffs.size() != static_cast<size_t>(m) * static_cast<size_t>(n))
    throw std::invalid_argument("CompactSystemParams: coeff matrix size mismatch");
  if (eigen_params.size() != static_cast<size_t>(n))
    throw std::invalid_argument("CompactSystemParams: eigen parameter count must be n");
  if (tag.slot_count() != n)
    throw std::invalid_argument("CompactSystemParams: jordan tag covers " +
                                std::to_string(tag.slot_count()) + " slots, expected n");
  for (double v : coeffs)
    if (!(std::abs(v) < 1.0))
      throw std::invalid_argument("CompactSystemParams: coefficients must satisfy |v| < 1");
  for (double v : eigen_params)
    if (!(std::abs(v) < 1.0))
      throw std::invalid_argument("CompactSystemParams: eigen parameters must satisfy |v| < 1");
}

FullSystemParams expand_compact(const CompactSystemParams& c) {
  FullSystemParams full = FullSystemParams::zeros(c.m, c.n, 1);

  // Walk the tag: each block takes one eigen-table row; its mode functions
  // land in the power-0 cos slot (l = 0) and, for complex pairs, the power-0
  // sin slot (l = n).
  int slot = 0;  // index into eigen_params and compact mode functions
  int row = 0;
  for (char block : c.tag.blocks) {
    if (block == 'R') {
      const double a = c.eigen_params[static_cast<size_t>(slot)];
      full.eigen_table[static_cast<size_t>(row)] = FullSystemParams::eigen_row(a, 0.0);
      for (int i = 0; i < c.m; ++i)
        full.coeff(i, row, 0, 0) = c.coeffs[static_cast<size_t>(i * c.n + slot)];
      slot += 1;
    } else {
      const double a = c.eigen_params[static_cast<size_t>(slot)];
      const double b = c.eigen_params[static_cast<size_t>(slot + 1)];
      full.eigen_table[static_cast<size_t>(row)] = FullSystemParams::eigen_row(a, b);
      for (int i = 0; i < c.m; ++i) {
        full.coeff(i, row, 0, 0) = c.coeffs[static_cast<size_t>(i * c.n + slot)];
        full.coeff(i, row, c.n, 0) = c.coeffs[static_cast<size_t>(i * c.n + slot + 1)];
      }
      slot += 2;
    }
    ++row;
  }
  return full;
}

std::vector<double> response_full(const FullSystemParams& params, const ControlMatrix& G,
                                  const BasisFamily& family, double tau,
                                  ResponseDiagnostics* diag) {
  if (G.m != params.m)
    throw std::invalid_argument("response_full: control rows do not match input count m");
  if (G.k != family.size())
    throw std::invalid_argument("response_full: control columns do not match family size k");
  if (!(tau > 0.0)) throw std::invalid_argument("response_full: tau must be positive");

  const int n = params.n;
  const int k = family.size();
  std::vector<double> y = params.offset;
  std::set<std::pair<int, int>> degenerate;

  for (int r = 0; r < n; ++r) {
    const double a = params.eigen_table[static_cast<size_t>(r)][0];
    const double b = params.eigen_table[static_cast<size_t>(r)][1];
    for (int l = 0; l < 2 * n; ++l) {
      const TrigKind trig = l < n ? TrigKind::Cos : TrigKind::Sin;
      const int power = l < n ? l : l - n;
      for (int j = 0; j < k; ++j) {
        const XiBasisResult xi =
            integrate_xi_times_basis_detail(power, a, b, trig, family[j], tau);
        if (xi.degenerate) degenerate.insert({r, j});
        for (int i = 0; i < params.m; ++i) {
          const double g = G(i, j);
          if (g == 0.0) continue;
          for (int kappa = 0; kappa < params.p; ++kappa)
            y[static_cast<size_t>(kappa)] += params.coeff(i, r, l, kappa) * g * xi.value;
        }
      }
    }
  }
  if (diag) diag->degenerate_pairs.assign(degenerate.begin(), degenerate.end());
  return y;
}

std::vector<double> precompute_lambda_j(const FullSystemParams& params,
                                        const BasisFamily& family, double tau) {
  if (params.m != 1 || params.p != 1)
    throw std::invalid_argument("precompute_lambda_j: requires scalar input and output");

  const int n = params.n;
  std::vector<double> lambda(static_cast<size_t>(family.size()), 0.0);
  for (int j = 0; j < family.size(); ++j) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
      const double a = params.eigen_table[static_cast<size_t>(r)][0];
      const double b = params.eigen_table[static_cast<size_t>(r)][1];
      for (int l = 0; l < 2 * n; ++l) {
        const double c = params.coeff(0, r, l, 0);
        if (c == 0.0) continue;
        const TrigKind trig = l < n ? TrigKind::Cos : TrigKind::Sin;
        const int power = l < n ? l : l - n;
        acc += c * integrate_xi_times_basis(power, a, b, trig, family[j], tau);
      }
    }
    lambda[static_cast<size_t>(j)] = acc;
  }
  return lambda;
}

std::vector<double> precompute_lambda_j(const CompactSystemParams& params,
                                        const BasisFamily& family, double tau) {
  if (params.m != 1)
    throw std::invalid_argument("precompute_lambda_j: requires scalar input");
  return precompute_lambda_j(expand_compact(params), family, tau);
}

std::vector<int> sign_observe(std::span<const double> y) {
  std::vector<int> bits;
  bits.reserve(y.size());
  for (double v : y) bits.push_back(v > 0.0 ? 1 : 0);
  return bits;
}

double loss_eval(double z1, double z2) {
  const double d = z1 - z2;
  const double d2 = d * d;
  return d2 / (1.0 + d2);
}

double oracle_rk4(const StateSpaceSim& sys, const ControlSignal& u, double tau, int steps) {
  if (steps < 100) throw std::invalid_argument("oracle_rk4: steps must be >= 100");
  if (!(tau > 0.0)) throw std::invalid_argument("oracle_rk4: tau must be positive");

  // Segment [0, tau] at control breakpoints; each segment gets a share of the
  // step budget proportional to its length (at least 16 steps).
  std::vector<double> cuts{0.0, tau};
  for (double b : u.breakpoints)
    if (b > 0.0 && b < tau) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Eigen::VectorXd x = sys.x0;
  for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double lo = cuts[seg];
    const double hi = cuts[seg + 1];
    const int seg_steps =
        std::max(16, static_cast<int>(std::ceil(steps * (hi - lo) / tau)));
    const double h = (hi - lo) / seg_steps;
    for (int s = 0; s < seg_steps; ++s) {
      const double t = lo + s * h;
      const Eigen::VectorXd k1 = sys.rhs(t, x, u.eval(t));
      const Eigen::VectorXd k2 = sys.rhs(t + 0.5 * h, x + 0.5 * h * k1, u.eval(t + 0.5 * h));
      const Eigen::VectorXd k3 = sys.rhs(t + 0.5 * h, x + 0.5 * h * k2, u.eval(t + 0.5 * h));
      const Eigen::VectorXd k4 = sys.rhs(t + h, x + h * k3, u.eval(t + h));
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite())
        throw std::runtime_error("oracle_rk4: non-finite state at t = " + std::to_string(t + h));
    }
  }
  return sys.output(x);
}

StateSpaceSim make_oscillator(double lambda) {
  StateSpaceSim sim;
  sim.x0 = Eigen::VectorXd::Zero(2);
  sim.rhs = [lambda](double, const Eigen::VectorXd& x, double u) {
    Eigen::VectorXd dx(2);
    dx(0) = x(1);
    dx(1) = -lambda * lambda * x(0) + u;
    return dx;
  };
  sim.output = [](const Eigen::VectorXd& x) { return -x(0); };
  return sim;
}

}  // namespace vclab
