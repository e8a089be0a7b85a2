#include "vclab/expsin.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace vclab {
namespace {

using cplx = std::complex<double>;

// Abscissae/weights of the 15-point Kronrod rule with embedded 7-point Gauss
// rule on [-1, 1] (nonnegative abscissae; the rule is symmetric).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct PanelEstimate {
  double integral = 0.0;
  double error = 0.0;
  double resabs = 0.0;  // K15 estimate of integral |f|
};

PanelEstimate gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv[15];
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw std::runtime_error("integrate_quadrature: non-finite integrand at t = " +
                               std::to_string(x));
    return v;
  };

  for (int i = 0; i < 7; ++i) {
    fv[i] = eval(center - half * kXgk[i]);
    fv[14 - i] = eval(center + half * kXgk[i]);
  }
  fv[7] = eval(center);

  double kronrod = kWgk[7] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  double gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }

  PanelEstimate out;
  out.integral = kronrod * half;
  out.resabs = resabs * std::abs(half);
  out.error = std::abs((kronrod - gauss) * half);
  return out;
}

// integral_0^tau t^K e^(z t) dt for complex z, |z| tau small: Maclaurin series
// tau^(K+1) * sum_j (z tau)^j / (j! (K + j + 1)). Terms decay factorially; the
// worst-case cancellation is bounded by e^|z tau|, which the caller keeps small.
cplx power_exp_series(int K, cplx z, double tau) {
  const cplx zt = z * tau;
  cplx term(1.0, 0.0);
  cplx sum(0.0, 0.0);
  cplx comp(0.0, 0.0);  // Kahan compensation
  for (int j = 0; j < 500; ++j) {
    const cplx contrib = term / static_cast<double>(K + j + 1);
    const cplx y = contrib - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(contrib) < 1e-20 * (std::abs(sum) + 1e-300) && j > 2) break;
    term *= zt / static_cast<double>(j + 1);
  }
  return sum * std::pow(tau, K + 1);
}

// Same integral via the closed antiderivative and the upward recursion
//   I_0 = (e^(z tau) - 1) / z,
//   I_K = (tau^K e^(z tau) - K I_{K-1}) / z.
// Real/imaginary parts reproduce the paired cos/sin recursions. Stable when
// |z| tau is not small relative to K.
cplx power_exp_recursion(int K, cplx z, double tau) {
  const cplx ezt = std::exp(z * tau);
  cplx ik = (ezt - 1.0) / z;
  double tau_pow = 1.0;
  for (int k = 1; k <= K; ++k) {
    tau_pow *= tau;
    ik = (tau_pow * ezt - static_cast<double>(k) * ik) / z;
  }
  return ik;
}

cplx power_exp_integral(int K, cplx z, double tau) {
  if (std::abs(z) * tau <= 8.0) return power_exp_series(K, z, tau);
  return power_exp_recursion(K, z, tau);
}

double monomial_quadrature_fallback(const ExpTrigMonomial& m, double tau) {
  auto f = [&](double t) {
    const double trig =
        m.phase == TrigKind::Sin ? std::sin(m.freq * t) : std::cos(m.freq * t);
    double tp = 1.0;
    for (int i = 0; i < m.power; ++i) tp *= t;
    return tp * std::exp(m.rate * t) * trig;
  };
  return integrate_quadrature(f, tau, 1e-12);
}

}  // namespace

IntegralResult integrate_monomial(const ExpTrigMonomial& m, double tau) {
  if (m.power < 0) throw std::invalid_argument("integrate_monomial: power must be >= 0");
  if (!std::isfinite(m.rate) || !std::isfinite(m.freq) || !std::isfinite(tau))
    throw std::invalid_argument("integrate_monomial: non-finite input");
  if (tau <= 0.0) throw std::invalid_argument("integrate_monomial: tau must be positive");

  // e^(rate tau) and tau^(K+1) both appear in the closed form.
  const double log_scale = m.rate * tau;
  const double log_tau_pow = (m.power + 1) * std::log(tau);
  if (log_scale > 700.0 || log_tau_pow > 700.0 || log_scale + log_tau_pow > 700.0)
    throw std::range_error("integrate_monomial: e^(rate*tau) overflows double range");

  IntegralResult out;
  out.denom_magnitude = m.rate * m.rate + m.freq * m.freq;

  if (m.rate == 0.0 && m.freq == 0.0) {
    out.branch = IntegralBranch::DegenerateDenominator;
    out.value = m.phase == TrigKind::Sin ? 0.0 : std::pow(tau, m.power + 1) / (m.power + 1);
    return out;
  }
  if (out.denom_magnitude <= kDegenerateDenomThreshold) {
    out.branch = IntegralBranch::DegenerateDenominator;
    out.value = monomial_quadrature_fallback(m, tau);
    return out;
  }

  const cplx ik = power_exp_integral(m.power, cplx(m.rate, m.freq), tau);
  out.branch = IntegralBranch::Regular;
  out.value = m.phase == TrigKind::Sin ? ik.imag() : ik.real();
  return out;
}

XiBasisResult integrate_xi_times_basis_detail(int l_xi, double a, double b, TrigKind trig,
                                              const BasisFunction& omega, double tau) {
  if (l_xi < 0) throw std::invalid_argument("integrate_xi_times_basis: l_xi must be >= 0");

  const int power = l_xi + omega.ell;
  const double rate = a + omega.alpha;
  const double beta = omega.beta;

  // Product-to-sum table:
  //   sin(b)sin(B) = (cos((b-B)t) - cos((b+B)t)) / 2
  //   cos(b)cos(B) = (cos((b-B)t) + cos((b+B)t)) / 2
  //   sin(b)cos(B) = (sin((b+B)t) + sin((b-B)t)) / 2
  //   cos(b)sin(B) = (sin((b+B)t) - sin((b-B)t)) / 2
  struct Part {
    double coeff;
    double freq;
    TrigKind phase;
  };
  Part parts[2];
  if (trig == TrigKind::Sin && omega.kind == TrigKind::Sin) {
    parts[0] = {0.5, b - beta, TrigKind::Cos};
    parts[1] = {-0.5, b + beta, TrigKind::Cos};
  } else if (trig == TrigKind::Cos && omega.kind == TrigKind::Cos) {
    parts[0] = {0.5, b - beta, TrigKind::Cos};
    parts[1] = {0.5, b + beta, TrigKind::Cos};
  } else if (trig == TrigKind::Sin && omega.kind == TrigKind::Cos) {
    parts[0] = {0.5, b + beta, TrigKind::Sin};
    parts[1] = {0.5, b - beta, TrigKind::Sin};
  } else {
    parts[0] = {0.5, b + beta, TrigKind::Sin};
    parts[1] = {-0.5, b - beta, TrigKind::Sin};
  }

  XiBasisResult out;
  for (const Part& p : parts) {
    const IntegralResult r = integrate_monomial({power, rate, p.freq, p.phase}, tau);
    out.value += p.coeff * r.value;
    out.degenerate = out.degenerate || r.branch == IntegralBranch::DegenerateDenominator;
  }
  return out;
}

double integrate_xi_times_basis(int l_xi, double a, double b, TrigKind trig,
                                const BasisFunction& omega, double tau) {
  return integrate_xi_times_basis_detail(l_xi, a, b, trig, omega, tau).value;
}

double integrate_quadrature(const std::function<double(double)>& f, double tau,
                            double rel_tol, int max_intervals) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("integrate_quadrature: tau must be positive and finite");
  if (!(rel_tol > 0.0) || rel_tol > 1e-2)
    throw std::invalid_argument("integrate_quadrature: rel_tol must lie in (0, 1e-2]");

  struct Panel {
    double lo, hi;
    PanelEstimate est;
    long order;  // insertion order; deterministic tie-break
    bool operator<(const Panel& o) const {
      if (est.error != o.est.error) return est.error < o.est.error;
      return order > o.order;
    }
  };

  std::priority_queue<Panel> panels;
  long counter = 0;
  panels.push({0.0, tau, gauss_kronrod_15(f, 0.0, tau), counter++});

  double total = panels.top().est.integral;
  double total_err = panels.top().est.error;
  double total_resabs = panels.top().est.resabs;

  int used = 1;
  while (true) {
    const double floor_abs = 50.0 * std::numeric_limits<double>::epsilon() * total_resabs;
    if (total_err <= std::max(rel_tol * std::abs(total), floor_abs)) break;
    if (used >= max_intervals)
      throw std::runtime_error(
          "integrate_quadrature: failed to converge within subdivision budget (" +
          std::to_string(max_intervals) + " panels, error " + std::to_string(total_err) + ")");

    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Panel left{worst.lo, mid, gauss_kronrod_15(f, worst.lo, mid), counter++};
    Panel right{mid, worst.hi, gauss_kronrod_15(f, mid, worst.hi), counter++};

    total += left.est.integral + right.est.integral - worst.est.integral;
    total_err += left.est.error + right.est.error - worst.est.error;
    total_resabs += left.est.resabs + right.est.resabs - worst.est.resabs;
    panels.push(left);
    panels.push(right);
    ++used;
  }
  return total;
}

}  // namespace vclab
