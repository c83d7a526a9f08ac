#include "wuseq/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "wuseq/error.hpp"

namespace wuseq {

auto to_string(Transform t) -> std::string_view {
  return t == Transform::Quantile ? "quantile" : "rank";
}

auto parse_transform(std::string_view text) -> Transform {
  if (text == "quantile") return Transform::Quantile;
  if (text == "rank") return Transform::Rank;
  throw InputError("unknown transform '" + std::string(text) + "'");
}

auto rank_with_ties(std::span<const double> y) -> Eigen::VectorXd {
  const auto n = y.size();
  if (n < 2) throw InputError("ranking needs at least 2 values");
  for (double v : y) {
    if (!std::isfinite(v)) throw InputError("phenotype values must be finite");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return y[a] < y[b]; });

  Eigen::VectorXd ranks(static_cast<Index>(n));
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && y[order[end]] == y[order[start]]) ++end;
    // Positions start..end-1 hold ranks start+1..end.
    const double mid = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks(static_cast<Index>(order[k])) = mid;
    start = end;
  }
  return ranks;
}

auto rank_with_ties(const Eigen::VectorXd& y) -> Eigen::VectorXd {
  return rank_with_ties(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

auto inverse_normal_cdf(double p) -> double {
  if (!(p > 0.0 && p < 1.0)) throw InputError("inverse normal CDF argument outside (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

auto quantile_transform(const Eigen::VectorXd& y, Transform transform) -> QuantileVector {
  const Eigen::VectorXd ranks = rank_with_ties(y);
  const Index n = ranks.size();
  if ((ranks.array() == ranks(0)).all()) throw InputError("degenerate phenotype");

  QuantileVector out{Eigen::VectorXd(n), transform};
  const double nd = static_cast<double>(n);
  if (transform == Transform::Quantile) {
    for (Index i = 0; i < n; ++i) {
      // Evaluate through the nearer tail so that rank r and n + 1 - r map
      // to exactly opposite values.
      const double lower = ranks(i) - 0.5;
      const double upper = nd - ranks(i) + 0.5;
      out.q(i) = lower <= upper ? inverse_normal_cdf(lower / nd) : -inverse_normal_cdf(upper / nd);
    }
  } else {
    const double mean = 0.5 * (nd + 1.0);
    const Eigen::ArrayXd centred = ranks.array() - mean;
    const double sd = std::sqrt(centred.square().sum() / (nd - 1.0));
    out.q = (centred / sd).matrix();
  }
  return out;
}

}  // namespace wuseq
