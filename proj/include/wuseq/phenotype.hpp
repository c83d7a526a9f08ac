#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"

namespace wuseq {

// Quantile: normal quantiles of mid-ranks. Rank: mid-ranks centred to mean 0
// and scaled to unit sample variance.
enum class Transform { Quantile, Rank };

auto to_string(Transform t) -> std::string_view;
auto parse_transform(std::string_view text) -> Transform;

struct QuantileVector {
  Eigen::VectorXd q;
  Transform transform = Transform::Quantile;

  auto n() const -> Index { return q.size(); }
};

// Ranks 1..n; tied values share the average rank of their block.
auto rank_with_ties(std::span<const double> y) -> Eigen::VectorXd;
auto rank_with_ties(const Eigen::VectorXd& y) -> Eigen::VectorXd;

// Inverse standard normal CDF on (0, 1).
auto inverse_normal_cdf(double p) -> double;

auto quantile_transform(const Eigen::VectorXd& y, Transform transform = Transform::Quantile)
    -> QuantileVector;

}  // namespace wuseq
