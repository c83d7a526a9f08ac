#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"
#include "wuseq/nulldist.hpp"
#include "wuseq/phenotype.hpp"
#include "wuseq/similarity.hpp"
#include "wuseq/ustat.hpp"

namespace wuseq {

struct AssocOptions {
  double maf_threshold = 0.03;
  SimilarityKind kernel = SimilarityKind::WeightedIbs;
  double distance_scale = 1.0;
  Transform transform = Transform::Quantile;
  NormKind norm = NormKind::L2;
  std::size_t permutations = 0;  // 0: asymptotic p-value only
  std::uint64_t seed = 1;
};

// Imputed and MAF-filtered genotypes, with frequencies of what was kept.
struct PreparedGenotypes {
  GenotypeMatrix g;
  MafVector maf;
};

auto prepare_genotypes(const GenotypeMatrix& g, double maf_threshold, std::uint64_t seed)
    -> PreparedGenotypes;

auto genetic_similarity(const PreparedGenotypes& prepared, SimilarityKind kind,
                        double distance_scale = 1.0) -> SimilarityMatrix;

struct WuOutcome {
  ScalingConstant c;
  TestResult result;
};

// Transform, centre the weights and test; with covariates the projected
// residuals are used. Permutations (if any) shuffle the tested vector.
auto wu_test(const SimilarityMatrix& w, const Eigen::VectorXd& y,
             const std::optional<CovariateMatrix>& x, Transform transform, NormKind norm,
             std::size_t permutations = 0, std::uint64_t seed = 1) -> WuOutcome;

struct AssocOutcome {
  Index n = 0;
  Index variants_retained = 0;
  ScalingConstant c;
  TestResult result;
};

// impute -> filter -> similarity -> transform -> test
auto run_association(const GenotypeMatrix& g, const Eigen::VectorXd& y,
                     const std::optional<CovariateMatrix>& x, const AssocOptions& options)
    -> AssocOutcome;

}  // namespace wuseq
