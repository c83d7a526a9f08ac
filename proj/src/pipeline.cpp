#include "wuseq/pipeline.hpp"

#include "wuseq/covadjust.hpp"
#include "wuseq/error.hpp"
#include "wuseq/random.hpp"

namespace wuseq {

auto prepare_genotypes(const GenotypeMatrix& g, double maf_threshold, std::uint64_t seed)
    -> PreparedGenotypes {
  const auto imputed = g.has_missing() ? impute_missing(g, compute_maf(g), seed) : g;
  auto kept = filter_by_maf(imputed, compute_maf(imputed), maf_threshold);
  auto maf = compute_maf(kept);
  return {std::move(kept), std::move(maf)};
}

auto genetic_similarity(const PreparedGenotypes& prepared, SimilarityKind kind,
                        double distance_scale) -> SimilarityMatrix {
  return kind == SimilarityKind::WeightedIbs ? weighted_ibs(prepared.g, prepared.maf)
                                             : exp_distance_similarity(prepared.g, distance_scale);
}

auto wu_test(const SimilarityMatrix& w, const Eigen::VectorXd& y,
             const std::optional<CovariateMatrix>& x, Transform transform, NormKind norm,
             std::size_t permutations, std::uint64_t seed) -> WuOutcome {
  if (w.n() != y.size()) throw InputError("similarity matrix and phenotype differ in length");
  const auto q = quantile_transform(y, transform);
  const auto k = build_weight_matrix(w, norm);
  WuOutcome out{k.c, {}};
  if (x) {
    const auto projected = project_residuals(q, *x);
    out.result = adjusted_test(k, projected);
    if (permutations > 0) {
      out.result.p_permutation = permutation_pvalue(k, projected.residuals, permutations, seed);
    }
  } else {
    out.result = asymptotic_pvalue(k, q);
    if (permutations > 0) out.result.p_permutation = permutation_pvalue(k, q, permutations, seed);
  }
  if (permutations > 0) out.result.n_permutations = permutations;
  return out;
}

auto run_association(const GenotypeMatrix& g, const Eigen::VectorXd& y,
                     const std::optional<CovariateMatrix>& x, const AssocOptions& options)
    -> AssocOutcome {
  if (y.size() != g.n_samples()) throw InputError("phenotype and genotypes differ in sample count");
  if (x && x->n_samples() != g.n_samples()) {
    throw InputError("covariates and genotypes differ in sample count");
  }
  const auto prepared = prepare_genotypes(g, options.maf_threshold, derive_seed(options.seed, 1));
  const auto w = genetic_similarity(prepared, options.kernel, options.distance_scale);
  auto wu = wu_test(w, y, x, options.transform, options.norm, options.permutations,
                    derive_seed(options.seed, 2));
  if (g.n_samples() == 2) {
    wu.result.diagnostics.warnings.emplace_back("degenerate design: two samples");
  }
  return {g.n_samples(), prepared.g.n_variants(), wu.c, std::move(wu.result)};
}

}  // namespace wuseq
