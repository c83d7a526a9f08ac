#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"
#include "wuseq/nulldist.hpp"

namespace wuseq {

// H = I - X (X'X)^-1 X' and the residual scale of Q after projection.
struct ProjectionContext {
  Eigen::MatrixXd h;
  Eigen::MatrixXd basis;  // orthonormal basis U of span(X); H = I - UU'
  double sigma_hat = 0.0;
  Index rank = 0;
};

struct ProjectedPhenotype {
  Eigen::VectorXd residuals;  // HQ / sigma_hat
  ProjectionContext context;
};

auto projection_matrix(const CovariateMatrix& x) -> ProjectionContext;

auto project_residuals(const Eigen::VectorXd& q, const CovariateMatrix& x) -> ProjectedPhenotype;
auto project_residuals(const QuantileVector& q, const CovariateMatrix& x) -> ProjectedPhenotype;

// Statistic over i != i' with K and the residuals; null weights are the
// eigenvalues of HKH over n - 1, rescaled to the shuffle variance of the
// residuals (see match_permutation_variance).
auto adjusted_test(const CenteredWeightMatrix& k, const ProjectedPhenotype& projected)
    -> TestResult;
auto adjusted_test(const CenteredWeightMatrix& k, const QuantileVector& q,
                   const CovariateMatrix& x) -> TestResult;

}  // namespace wuseq
