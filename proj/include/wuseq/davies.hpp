#pragma once

#include <span>

namespace wuseq {

// Distribution function of a chi-squared mixture by numerical inversion of
// the characteristic function, with the integration step and truncation
// point chosen from explicit error bounds (Davies 1980, algorithm AS 155).
struct DaviesOptions {
  double accuracy = 1e-6;  // absolute error target on the CDF
  int max_terms = 100000;  // integration terms (and bound evaluations) budget
};

enum class DaviesFault {
  None = 0,
  AccuracyNotMet = 1,  // required accuracy not achieved within max_terms
  RoundOff = 2,        // round-off error possibly significant
  InvalidInput = 3,
  NoIntegrationParameters = 4,  // bound search exceeded max_terms evaluations
};

struct DaviesResult {
  double cdf = -1.0;  // P(Q < x); meaningful unless fault is 1, 3 or 4
  DaviesFault fault = DaviesFault::None;
  double error_bound = 0.0;  // the accuracy that was targeted
  double absolute_sum = 0.0;
  int terms = 0;
  int integrations = 0;
  double interval = 0.0;
  double truncation_point = 0.0;
  double convergence_sd = 0.0;
  int bound_evaluations = 0;

  auto usable() const -> bool {
    return fault == DaviesFault::None || fault == DaviesFault::RoundOff;
  }
};

// sum_j weight_j * chi2_1(noncentrality_j) + sigma * N(0, 1). An empty
// noncentrality span means all terms are central.
struct DaviesTerms {
  std::span<const double> weights;
  std::span<const double> noncentrality;
  double sigma = 0.0;
};

auto davies_cdf(const DaviesTerms& terms, double x, const DaviesOptions& options = {})
    -> DaviesResult;
auto davies_cdf(std::span<const double> weights, double x, const DaviesOptions& options = {})
    -> DaviesResult;

}  // namespace wuseq
