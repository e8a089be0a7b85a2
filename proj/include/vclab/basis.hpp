#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace vclab {

enum class TrigKind { Sin, Cos };

inline const char* to_string(TrigKind k) { return k == TrigKind::Sin ? "sin" : "cos"; }

/// One band-limited input dictionary element t^ell * e^(alpha t) * sin/cos(beta t).
struct BasisFunction {
  int ell = 0;
  double alpha = 0.0;
  double beta = 0.0;
  TrigKind kind = TrigKind::Cos;

  double operator()(double t) const {
    const double trig = kind == TrigKind::Sin ? std::sin(beta * t) : std::cos(beta * t);
    double tp = 1.0;
    for (int i = 0; i < ell; ++i) tp *= t;
    return tp * std::exp(alpha * t) * trig;
  }

  bool same_signature(const BasisFunction& o) const {
    return ell == o.ell && alpha == o.alpha && beta == o.beta && kind == o.kind;
  }
};

/// Ordered dictionary of k basis functions. Construction validates:
///  - well-formed elements (finite parameters, ell >= 0, sin elements need beta != 0),
///  - pairwise-distinct (ell, alpha, beta, kind) signatures,
///  - numerical linear independence: the Gram matrix of L2 inner products on
///    [0, 1] must have smallest singular value above 1e-10 of its largest.
class BasisFamily {
 public:
  explicit BasisFamily(std::vector<BasisFunction> elements);

  const std::vector<BasisFunction>& elements() const { return elements_; }
  const BasisFunction& operator[](int j) const { return elements_[static_cast<size_t>(j)]; }
  int size() const { return static_cast<int>(elements_.size()); }
  int ell_max() const { return ell_max_; }

  /// Smallest/largest singular value ratio of the [0,1] Gram matrix.
  double gram_ratio() const { return gram_ratio_; }

 private:
  std::vector<BasisFunction> elements_;
  int ell_max_ = 0;
  double gram_ratio_ = 1.0;
};

/// Convenience: {sin(j*pi*t)}_{j=1..k}.
BasisFamily sine_family(int k);

}  // namespace vclab
