#pragma once

// Shared oracles and generators for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"
#include "wuseq/random.hpp"
#include "wuseq/similarity.hpp"

namespace wuseq::testing {

inline auto random_symmetric_zero_diag(Index n, Rng& rng) -> Eigen::MatrixXd {
  std::normal_distribution<double> z;
  Eigen::MatrixXd k(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = 0.0;
    for (Index j = 0; j < i; ++j) k(i, j) = k(j, i) = z(rng);
  }
  return k;
}

inline auto random_vector(Index n, Rng& rng) -> Eigen::VectorXd {
  std::normal_distribution<double> z;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = z(rng);
  return v;
}

// Symmetric matrix with entries in [0, 1] and unit diagonal.
inline auto random_similarity(Index n, Rng& rng) -> SimilarityMatrix {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) w(i, j) = w(j, i) = u(rng);
  }
  return {w, SimilarityKind::WeightedIbs};
}

// sum over ordered pairs i != j of k_ij q_i q_j.
inline auto pairwise_sum(const Eigen::MatrixXd& k, const Eigen::VectorXd& q) -> double {
  double s = 0.0;
  for (Index i = 0; i < q.size(); ++i) {
    for (Index j = 0; j < q.size(); ++j) {
      if (i != j) s += k(i, j) * q(i) * q(j);
    }
  }
  return s;
}

inline auto relative_error(double a, double b) -> double {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

// Asymptotic Kolmogorov distribution: P(sqrt(n) D > x).
inline auto kolmogorov_survival(double x) -> double {
  if (x <= 0.0) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

// One-sample KS test of uniformity on [0, 1]; returns the p-value with the
// Stephens small-sample correction.
inline auto ks_uniform_pvalue(std::vector<double> x) -> double {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, x[i] - lo, hi - x[i]});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
}

inline auto random_genotypes(Index n, Index p, double maf, Rng& rng) -> GenotypeMatrix {
  std::binomial_distribution<int> draw(2, maf);
  GenotypeMatrix::Values v(n, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) v(i, j) = static_cast<std::uint8_t>(draw(rng));
  }
  return GenotypeMatrix(v);
}

}  // namespace wuseq::testing
