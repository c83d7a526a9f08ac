#include "wuseq/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wuseq/error.hpp"

namespace wuseq {

auto to_string(NormKind norm) -> std::string_view { return norm == NormKind::L1 ? "L1" : "L2"; }

auto parse_norm(std::string_view text) -> NormKind {
  if (text == "L1" || text == "l1") return NormKind::L1;
  if (text == "L2" || text == "l2") return NormKind::L2;
  throw InputError("unknown c-norm '" + std::string(text) + "'");
}

auto scaling_constant(const SimilarityMatrix& w, NormKind norm) -> ScalingConstant {
  const Index n = w.n();
  if (n < 2) throw InputError("scaling constant needs at least 2 samples");

  ScalingConstant out{0.0, norm, false};
  double smallest_positive = std::numeric_limits<double>::infinity();
  if (norm == NormKind::L2) {
    double sum = 0.0;
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < n; ++i) {
        sum += w.w(i, j);
        if (w.w(i, j) > 0.0) smallest_positive = std::min(smallest_positive, w.w(i, j));
      }
    }
    out.value = sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  } else {
    // Each unordered pair appears twice among ordered pairs, so the median of
    // the lower triangle is the median of all off-diagonal entries.
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < n; ++i) {
        entries.push_back(w.w(i, j));
        if (w.w(i, j) > 0.0) smallest_positive = std::min(smallest_positive, w.w(i, j));
      }
    }
    // Over the 2m ordered entries the lower median is the m-th smallest,
    // i.e. the ceil(m/2)-th smallest of the m distinct-pair entries.
    const auto m = entries.size();
    const auto pos = (m + 1) / 2 - 1;
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(pos),
                     entries.end());
    out.value = entries[pos];
  }
  if (!(out.value > 0.0)) {
    if (!std::isfinite(smallest_positive)) {
      throw InputError("all off-diagonal similarities are zero");
    }
    out.value = smallest_positive;
    out.clamped = true;
  }
  return out;
}

auto build_weight_matrix(const SimilarityMatrix& w, const ScalingConstant& c)
    -> CenteredWeightMatrix {
  if (!std::isfinite(c.value)) throw InputError("scaling constant must be finite");
  CenteredWeightMatrix out{(w.w.array() - c.value).matrix(), c};
  out.k.diagonal().setZero();
  return out;
}

auto build_weight_matrix(const SimilarityMatrix& w, NormKind norm) -> CenteredWeightMatrix {
  return build_weight_matrix(w, scaling_constant(w, norm));
}

auto wu_statistic(const CenteredWeightMatrix& k, const Eigen::VectorXd& q) -> double {
  if (k.n() != q.size()) throw InputError("weight matrix and phenotype vector differ in length");
  const double n = static_cast<double>(q.size());
  const double quad = q.dot(k.k.selfadjointView<Eigen::Lower>() * q);
  return quad / (n * (n - 1.0));
}

auto wu_statistic(const CenteredWeightMatrix& k, const QuantileVector& q) -> double {
  return wu_statistic(k, q.q);
}

auto u_components(const SimilarityMatrix& w, const QuantileVector& q) -> UComponents {
  if (w.n() != q.n()) throw InputError("similarity matrix and phenotype vector differ in length");
  const Index n = q.n();
  double weighted = 0.0;
  double unweighted = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double s = q.q(i) * q.q(j);
      weighted += w.w(i, j) * s;
      unweighted += s;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  return {weighted / pairs, unweighted / pairs};
}

}  // namespace wuseq
