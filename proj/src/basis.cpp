#include "vclab/basis.hpp"

#include <Eigen/Dense>
#include <numbers>
#include <stdexcept>

#include "vclab/expsin.hpp"

namespace vclab {

BasisFamily::BasisFamily(std::vector<BasisFunction> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("BasisFamily: empty element list");

  for (size_t j = 0; j < elements_.size(); ++j) {
    const BasisFunction& w = elements_[j];
    if (w.ell < 0) throw std::invalid_argument("BasisFamily: ell must be >= 0");
    if (!std::isfinite(w.alpha) || !std::isfinite(w.beta))
      throw std::invalid_argument("BasisFamily: non-finite parameters");
    if (w.kind == TrigKind::Sin && w.beta == 0.0)
      throw std::invalid_argument("BasisFamily: sin element with beta = 0 is identically zero");
    ell_max_ = std::max(ell_max_, w.ell);
    for (size_t i = 0; i < j; ++i)
      if (elements_[i].same_signature(w))
        throw std::invalid_argument("BasisFamily: duplicate (ell, alpha, beta, kind) signature");
  }

  // Gram matrix of L2 inner products on [0, 1].
  const int k = size();
  Eigen::MatrixXd gram(k, k);
  for (int i = 0; i < k; ++i) {
    const BasisFunction& wi = elements_[static_cast<size_t>(i)];
    for (int j = i; j < k; ++j) {
      const double v = integrate_xi_times_basis(wi.ell, wi.alpha, wi.beta, wi.kind,
                                                elements_[static_cast<size_t>(j)], 1.0);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto& sv = svd.singularValues();
  gram_ratio_ = sv(sv.size() - 1) / sv(0);
  if (!(gram_ratio_ > 1e-10))
    throw std::invalid_argument("BasisFamily: elements numerically linearly dependent (Gram ratio " +
                                std::to_string(gram_ratio_) + ")");
}

BasisFamily sine_family(int k) {
  std::vector<BasisFunction> elems;
  elems.reserve(static_cast<size_t>(k));
  for (int j = 1; j <= k; ++j)
    elems.push_back({0, 0.0, j * std::numbers::pi, TrigKind::Sin});
  return BasisFamily(std::move(elems));
}

}  // namespace vclab
