#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "wuseq/phenotype.hpp"
#include "wuseq/similarity.hpp"

namespace wuseq {

enum class NormKind { L1, L2 };

auto to_string(NormKind norm) -> std::string_view;
auto parse_norm(std::string_view text) -> NormKind;

// c balancing the weighted and unweighted U statistics. L2 is the
// off-diagonal mean of W, L1 the lower off-diagonal median. A non-positive
// value is replaced by the smallest positive off-diagonal entry.
struct ScalingConstant {
  double value = 0.0;
  NormKind norm = NormKind::L2;
  bool clamped = false;
};

auto scaling_constant(const SimilarityMatrix& w, NormKind norm) -> ScalingConstant;

// k_ii' = w_ii' - c off the diagonal, 0 on it.
struct CenteredWeightMatrix {
  Eigen::MatrixXd k;
  ScalingConstant c;

  auto n() const -> Index { return k.rows(); }
};

auto build_weight_matrix(const SimilarityMatrix& w, const ScalingConstant& c)
    -> CenteredWeightMatrix;
auto build_weight_matrix(const SimilarityMatrix& w, NormKind norm) -> CenteredWeightMatrix;

// Q'KQ / (n(n-1)). K must have a zero diagonal.
auto wu_statistic(const CenteredWeightMatrix& k, const Eigen::VectorXd& q) -> double;
auto wu_statistic(const CenteredWeightMatrix& k, const QuantileVector& q) -> double;

// Weighted U (weights w) and unweighted U (weights 1) over ordered pairs
// i != i' of the cross-product kernel q_i q_i'.
struct UComponents {
  double weighted = 0.0;
  double unweighted = 0.0;

  auto statistic(double c) const -> double { return weighted - c * unweighted; }
};

auto u_components(const SimilarityMatrix& w, const QuantileVector& q) -> UComponents;

}  // namespace wuseq
