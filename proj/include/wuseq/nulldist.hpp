#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wuseq/davies.hpp"
#include "wuseq/ustat.hpp"

namespace wuseq {

// Null of n * WU: sum_l lambda_l chi2_1(delta_l) + sigma * N(0, 1) - offset.
// The lambdas are eigenvalues of the weight matrix divided by n - 1; an
// empty `noncentrality` means every delta is zero.
struct MixtureSpec {
  std::vector<double> lambdas;
  std::vector<double> noncentrality;
  double sigma = 0.0;
  double offset = 0.0;  // subtracted from the mixture
  std::size_t truncated = 0;
  double weight_scale = 1.0;  // lambdas = weight_scale * eigenvalues / (n - 1)

  auto empty() const -> bool { return lambdas.empty() && sigma == 0.0; }
  auto sum() const -> double;       // sum of lambdas
  auto variance() const -> double;  // sum lambda^2 (2 + 4 delta) + sigma^2
};

inline constexpr double kEigenTruncation = 1e-12;

// Eigenvalues of the symmetric matrix `k` divided by `n - 1`; values below
// kEigenTruncation * max |lambda| are dropped and counted.
auto scaled_eigenvalues(const Eigen::MatrixXd& k, Index n) -> MixtureSpec;
auto scaled_eigenvalues(const CenteredWeightMatrix& k) -> MixtureSpec;

// CKC with C = I - 11'/n. For any q summing to zero, q'Kq = q'(CKC)q.
auto double_centered(const Eigen::MatrixXd& k) -> Eigen::MatrixXd;

struct TailProbability {
  double p = 1.0;
  double error_bound = 0.0;
  DaviesResult detail;
};

inline constexpr double kTailAccuracy = 1e-6;
inline constexpr double kMinTailProbability = 1e-12;

// P(mixture > t), clamped to [1e-12, 1]. Throws InputError for an empty
// mixture and NumericalError (carrying the best estimate found) if the
// accuracy target cannot be met.
auto mixture_tail_probability(const MixtureSpec& spec, double t) -> TailProbability;

struct MonteCarloTail {
  double p = 0.0;
  double standard_error = 0.0;
};

// Sampling oracle for the same tail: `draws` realisations of the mixture,
// evaluated at every threshold.
auto mixture_tail_monte_carlo(const MixtureSpec& spec, std::span<const double> thresholds,
                              std::size_t draws, std::uint64_t seed) -> std::vector<MonteCarloTail>;

struct TestDiagnostics {
  double eigen_sum = 0.0;  // sum of scaled eigenvalues, before weight_scale
  std::size_t truncated_eigenvalues = 0;
  double null_scale = 1.0;  // weight_scale of the mixture that was used
  double tail_error_bound = 0.0;
  std::vector<std::string> warnings;
};

struct TestResult {
  double statistic = 0.0;
  std::vector<double> scaled_eigenvalues;
  double p_asymptotic = 1.0;
  std::optional<double> p_permutation;
  std::optional<std::size_t> n_permutations;
  TestDiagnostics diagnostics;
};

// Upper-tail p-value of n * statistic against `spec`; an empty mixture
// yields p = 1 with a degenerate-design warning.
auto mixture_test(double statistic, Index n, const MixtureSpec& spec) -> TestResult;

// Null of n * WU under shuffling of q, with z = q - mean(q) treated as
// N(0, s^2 C), s^2 = |z|^2 / (n - 1), C = I - 11'/n. Then
//   q'Kq = z'(CKC)z + 2 mean(q) (CK1)'z + mean(q)^2 1'K1,
// giving weights s^2 eig(CKC) / (n - 1), noncentralities from the linear
// term along each eigenvector and a normal term for its part in the null
// space. Distinct phenotypes give mean(q) = 0 and a central mixture; ties
// (binary traits) give s^2 < 1 and, when unbalanced, mean(q) != 0.
// The mixture is then rescaled about its mean to the exact permutation
// variance; the Gaussian proxy overstates it when q has few distinct values
// (a two-valued z has Var(z^2) = 0 when balanced).
auto permutation_null(const CenteredWeightMatrix& k, const QuantileVector& q) -> MixtureSpec;

struct PermutationMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact mean and variance of n * WU = q_pi' K q_pi / (n - 1) over uniform
// shuffles pi, from the pair-overlap counts of the quadratic assignment
// statistic. O(n^2).
auto permutation_moments(const CenteredWeightMatrix& k, const Eigen::VectorXd& q)
    -> PermutationMoments;

// `spec` rescaled about its own mean to variance permutation_moments(k, q).
// Unchanged when either variance is zero or n < 4.
auto match_permutation_variance(MixtureSpec spec, const CenteredWeightMatrix& k,
                                const Eigen::VectorXd& q) -> MixtureSpec;

auto asymptotic_pvalue(const CenteredWeightMatrix& k, const QuantileVector& q) -> TestResult;

inline constexpr std::size_t kMinPermutations = 100;

// (1 + #{perm >= observed}) / (B + 1) over B uniform shuffles of q.
auto permutation_pvalue(const CenteredWeightMatrix& k, const Eigen::VectorXd& q, std::size_t b,
                        std::uint64_t seed) -> double;
auto permutation_pvalue(const CenteredWeightMatrix& k, const QuantileVector& q, std::size_t b,
                        std::uint64_t seed) -> double;

}  // namespace wuseq
