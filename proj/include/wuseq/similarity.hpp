#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"

namespace wuseq {

enum class SimilarityKind { WeightedIbs, ExpDistance };

auto to_string(SimilarityKind kind) -> std::string_view;
auto parse_similarity_kind(std::string_view text) -> SimilarityKind;

// Symmetric n x n genetic similarity with unit diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd w;
  SimilarityKind kind = SimilarityKind::WeightedIbs;

  auto n() const -> Index { return w.rows(); }
};

// w_ii' = sum_p (2 - |g_ip - g_i'p|) / sqrt(maf_p (1 - maf_p)), normalised by
// sum_p 2 / sqrt(maf_p (1 - maf_p)). Rare variants weigh more.
auto weighted_ibs(const GenotypeMatrix& g, const MafVector& maf) -> SimilarityMatrix;

// w_ii' = exp(-||g_i - g_i'|| / scale), Euclidean distance over dosages.
auto exp_distance_similarity(const GenotypeMatrix& g, double scale = 1.0) -> SimilarityMatrix;

}  // namespace wuseq
