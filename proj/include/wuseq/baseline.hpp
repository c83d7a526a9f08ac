#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"
#include "wuseq/nulldist.hpp"
#include "wuseq/similarity.hpp"
#include "wuseq/ustat.hpp"

namespace wuseq {

// Comparison tests on the untransformed phenotype.
//
// Score: e'We with e the standardised residuals of y on X and the full
// similarity matrix (diagonal included); null weights are the eigenvalues
// of HWH. This is the linear-kernel variance-component score test with an
// identity link.
//
// OffDiagonal: the WU statistic with the raw standardised residuals in
// place of normal quantiles.
enum class BaselineKind { Score, OffDiagonal };

auto to_string(BaselineKind kind) -> std::string_view;
auto parse_baseline_kind(std::string_view text) -> BaselineKind;

auto baseline_test(const SimilarityMatrix& w, const Eigen::VectorXd& y, const CovariateMatrix& x,
                   BaselineKind kind = BaselineKind::Score, NormKind norm = NormKind::L2)
    -> TestResult;

}  // namespace wuseq
