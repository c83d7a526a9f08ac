#include "wuseq/nulldist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "wuseq/error.hpp"
#include "wuseq/random.hpp"

namespace wuseq {

auto MixtureSpec::sum() const -> double {
  return std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
}

auto MixtureSpec::variance() const -> double {
  double s = sigma * sigma;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    const double d = noncentrality.empty() ? 0.0 : noncentrality[l];
    s += lambdas[l] * lambdas[l] * (2.0 + 4.0 * d);
  }
  return s;
}

auto scaled_eigenvalues(const Eigen::MatrixXd& k, Index n) -> MixtureSpec {
  if (k.rows() != k.cols()) throw InputError("weight matrix must be square");
  if (n < 2) throw InputError("mixture needs at least 2 samples");
  if (!k.allFinite()) throw NumericalError("eigendecomposition failed: non-finite weight matrix");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");

  const Eigen::VectorXd lambda = solver.eigenvalues() / static_cast<double>(n - 1);
  const double largest = lambda.size() > 0 ? lambda.cwiseAbs().maxCoeff() : 0.0;
  MixtureSpec spec;
  for (Index l = 0; l < lambda.size(); ++l) {
    if (largest > 0.0 && std::fabs(lambda(l)) >= kEigenTruncation * largest) {
      spec.lambdas.push_back(lambda(l));
    } else {
      ++spec.truncated;
    }
  }
  return spec;
}

auto scaled_eigenvalues(const CenteredWeightMatrix& k) -> MixtureSpec {
  return scaled_eigenvalues(k.k, k.n());
}

auto double_centered(const Eigen::MatrixXd& k) -> Eigen::MatrixXd {
  const double n = static_cast<double>(k.rows());
  const Eigen::VectorXd r = k.rowwise().sum() / n;
  const double mean = r.sum() / n;
  Eigen::MatrixXd out = k;
  out.colwise() -= r;
  out.rowwise() -= r.transpose();
  out.array() += mean;
  return out;
}

auto mixture_tail_probability(const MixtureSpec& spec, double t) -> TailProbability {
  if (spec.empty()) throw InputError("degenerate null distribution");
  if (!std::isfinite(t)) throw InputError("tail threshold must be finite");

  const double x = t + spec.offset;
  const DaviesTerms terms{spec.lambdas, spec.noncentrality, spec.sigma};
  auto finish = [](const DaviesResult& r) {
    TailProbability out;
    out.p = std::clamp(1.0 - r.cdf, kMinTailProbability, 1.0);
    out.error_bound = r.error_bound;
    out.detail = r;
    return out;
  };

  for (int budget : {100000, 1000000, 10000000}) {
    const auto r = davies_cdf(terms, x, {kTailAccuracy, budget});
    if (r.usable()) return finish(r);
    if (r.fault == DaviesFault::InvalidInput) throw InputError("invalid mixture weights");
  }
  std::optional<double> best;
  for (double relaxed : {1e-5, 1e-4, 1e-3}) {
    const auto r = davies_cdf(terms, x, {relaxed, 10000000});
    if (r.usable()) {
      best = finish(r).p;
      break;
    }
  }
  throw NumericalError("mixture tail probability did not reach accuracy 1e-6", best);
}

auto mixture_tail_monte_carlo(const MixtureSpec& spec, std::span<const double> thresholds,
                              std::size_t draws, std::uint64_t seed)
    -> std::vector<MonteCarloTail> {
  if (spec.empty()) throw InputError("degenerate null distribution");
  if (draws == 0) throw InputError("Monte-Carlo oracle needs at least one draw");

  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t n_chunks = (draws + kChunk - 1) / kChunk;
  const std::size_t n_t = thresholds.size();
  std::vector<std::size_t> hits(n_chunks * n_t, 0);

#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < n_chunks; ++c) {
    auto rng = make_rng(derive_seed(seed, c));
    std::normal_distribution<double> normal;
    const std::size_t count = std::min(kChunk, draws - c * kChunk);
    for (std::size_t d = 0; d < count; ++d) {
      double value = -spec.offset + spec.sigma * normal(rng);
      for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        const double shift = spec.noncentrality.empty() ? 0.0 : std::sqrt(spec.noncentrality[l]);
        const double z = normal(rng) + shift;
        value += spec.lambdas[l] * z * z;
      }
      for (std::size_t k = 0; k < n_t; ++k) {
        if (value > thresholds[k]) ++hits[c * n_t + k];
      }
    }
  }

  std::vector<MonteCarloTail> out(n_t);
  const double nd = static_cast<double>(draws);
  for (std::size_t k = 0; k < n_t; ++k) {
    std::size_t total = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) total += hits[c * n_t + k];
    const double p = static_cast<double>(total) / nd;
    out[k] = {p, std::sqrt(p * (1.0 - p) / nd)};
  }
  return out;
}

auto mixture_test(double statistic, Index n, const MixtureSpec& spec) -> TestResult {
  TestResult res;
  res.statistic = statistic;
  res.scaled_eigenvalues = spec.lambdas;
  for (double& l : res.scaled_eigenvalues) l /= spec.weight_scale;
  res.diagnostics.eigen_sum = spec.sum() / spec.weight_scale;
  res.diagnostics.truncated_eigenvalues = spec.truncated;
  res.diagnostics.null_scale = spec.weight_scale;
  if (spec.empty()) {
    res.p_asymptotic = 1.0;
    res.diagnostics.warnings.emplace_back("degenerate design: weight matrix is zero");
    return res;
  }
  const auto tail = mixture_tail_probability(spec, static_cast<double>(n) * statistic);
  res.p_asymptotic = tail.p;
  res.diagnostics.tail_error_bound = tail.error_bound;
  if (tail.detail.fault == DaviesFault::RoundOff) {
    res.diagnostics.warnings.emplace_back("tail probability: round-off error possibly significant");
  }
  return res;
}

auto permutation_moments(const CenteredWeightMatrix& k, const Eigen::VectorXd& q)
    -> PermutationMoments {
  const Index n = k.n();
  if (q.size() != n) throw InputError("weight matrix and phenotype vector differ in length");
  if (n < 4) throw InputError("permutation moments need at least 4 samples");
  const double nd = static_cast<double>(n);

  // For a symmetric zero-diagonal matrix: s0 = sum, s1 = sum of squares,
  // s2 = sum of squared row sums.
  struct Sums {
    double s0, s1, s2;
  };
  const Eigen::VectorXd row = k.k.rowwise().sum();
  const Sums a{row.sum(), k.k.squaredNorm(), row.squaredNorm()};
  const double total = q.sum();
  const double sq = q.squaredNorm();
  const double q4 = q.array().pow(4).sum();
  const Sums b{total * total - sq, sq * sq - q4,
               (q.array().square() * (total - q.array()).square()).sum()};

  const double p2 = nd * (nd - 1.0);
  const double p3 = p2 * (nd - 2.0);
  const double p4 = p3 * (nd - 3.0);
  const double mean = a.s0 * b.s0 / p2;
  const double second = 2.0 * a.s1 * b.s1 / p2 + 4.0 * (a.s2 - a.s1) * (b.s2 - b.s1) / p3 +
                        (a.s0 * a.s0 - 4.0 * a.s2 + 2.0 * a.s1) *
                            (b.s0 * b.s0 - 4.0 * b.s2 + 2.0 * b.s1) / p4;
  const double nm1 = nd - 1.0;
  return {mean / nm1, std::max(0.0, second - mean * mean) / (nm1 * nm1)};
}

auto match_permutation_variance(MixtureSpec spec, const CenteredWeightMatrix& k,
                                const Eigen::VectorXd& q) -> MixtureSpec {
  if (spec.empty() || k.n() < 4) return spec;
  const double approx = spec.variance();
  const double exact = permutation_moments(k, q).variance;
  if (!(approx > 0.0) || !(exact > 0.0)) return spec;
  const double g = std::sqrt(exact / approx);
  double centre = 0.0;
  for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
    const double d = spec.noncentrality.empty() ? 0.0 : spec.noncentrality[l];
    centre += spec.lambdas[l] * (1.0 + d);
  }
  for (double& l : spec.lambdas) l *= g;
  spec.sigma *= g;
  spec.weight_scale *= g;
  spec.offset = g * spec.offset + (g - 1.0) * (centre - spec.offset);
  return spec;
}

auto permutation_null(const CenteredWeightMatrix& k, const QuantileVector& q) -> MixtureSpec {
  const Index n = k.n();
  if (q.q.size() != n) throw InputError("weight matrix and phenotype vector differ in length");
  const double nm1 = static_cast<double>(n - 1);
  const double mean = q.q.mean();
  const double s2 = (q.q.array() - mean).matrix().squaredNorm() / nm1;
  const Eigen::MatrixXd a = double_centered(k.k);

  MixtureSpec spec;
  if (!(s2 > 0.0)) return spec;
  // Below this the linear term is rounding noise (distinct-value quantiles).
  if (std::fabs(mean) <= 1e-10) {
    spec = scaled_eigenvalues(a, n);
    for (double& l : spec.lambdas) l *= s2;
    spec.weight_scale = s2;
    return match_permutation_variance(spec, k, q.q);
  }

  if (!a.allFinite()) throw NumericalError("eigendecomposition failed: non-finite weight matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");
  const Eigen::VectorXd& mu = solver.eigenvalues();
  const Eigen::VectorXd row = k.k.rowwise().sum();
  const Eigen::VectorXd b = (row.array() - row.mean()).matrix();  // CK1
  const Eigen::VectorXd beta = solver.eigenvectors().transpose() * b;
  const double s = std::sqrt(s2);
  const double largest = mu.size() > 0 ? mu.cwiseAbs().maxCoeff() : 0.0;

  // n * WU = (s^2 sum mu_l eta_l^2 + 2 mean s sum beta_l eta_l + mean^2 1'K1) / (n - 1)
  double constant = mean * mean * row.sum();
  double residual = 0.0;  // |b|^2 outside the retained eigenvectors
  for (Index l = 0; l < mu.size(); ++l) {
    if (largest > 0.0 && std::fabs(mu(l)) >= kEigenTruncation * largest) {
      const double shift = mean * beta(l) / (s * mu(l));
      spec.lambdas.push_back(s2 * mu(l) / nm1);
      spec.noncentrality.push_back(shift * shift);
      constant -= mean * mean * beta(l) * beta(l) / mu(l);
    } else {
      residual += beta(l) * beta(l);
      ++spec.truncated;
    }
  }
  spec.weight_scale = s2;
  spec.sigma = 2.0 * std::fabs(mean) * s * std::sqrt(residual) / nm1;
  spec.offset = -constant / nm1;
  return match_permutation_variance(spec, k, q.q);
}

auto asymptotic_pvalue(const CenteredWeightMatrix& k, const QuantileVector& q) -> TestResult {
  const double stat = wu_statistic(k, q);
  auto res = mixture_test(stat, k.n(), permutation_null(k, q));
  if (k.c.clamped) {
    res.diagnostics.warnings.emplace_back("scaling constant clamped to smallest positive similarity");
  }
  return res;
}

auto permutation_pvalue(const CenteredWeightMatrix& k, const Eigen::VectorXd& q, std::size_t b,
                        std::uint64_t seed) -> double {
  if (b < kMinPermutations) throw InputError("permutation test needs at least 100 permutations");
  const Index n = k.n();
  if (q.size() != n) throw InputError("weight matrix and phenotype vector differ in length");

  const double observed = q.dot(k.k * q);
  // Permuted sums that equal the observed one up to rounding count as ties.
  const double tol = 1e-12 * k.k.cwiseAbs().sum() * q.squaredNorm();

  constexpr std::size_t kChunk = 256;
  const std::size_t n_chunks = (b + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(n_chunks, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < n_chunks; ++c) {
    auto rng = make_rng(derive_seed(seed, c));
    const auto m = static_cast<Index>(std::min(kChunk, b - c * kChunk));
    Eigen::MatrixXd perms(n, m);
    Eigen::VectorXd shuffled = q;
    for (Index col = 0; col < m; ++col) {
      std::shuffle(shuffled.data(), shuffled.data() + n, rng);
      perms.col(col) = shuffled;
    }
    const Eigen::MatrixXd kp = k.k * perms;
    const Eigen::RowVectorXd stats = perms.cwiseProduct(kp).colwise().sum();
    hits[c] = static_cast<std::size_t>((stats.array() >= observed - tol).count());
  }
  const auto total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return static_cast<double>(1 + total) / static_cast<double>(b + 1);
}

auto permutation_pvalue(const CenteredWeightMatrix& k, const QuantileVector& q, std::size_t b,
                        std::uint64_t seed) -> double {
  return permutation_pvalue(k, q.q, b, seed);
}

}  // namespace wuseq
