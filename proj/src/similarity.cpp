#include "wuseq/similarity.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "wuseq/error.hpp"

namespace wuseq {

auto to_string(SimilarityKind kind) -> std::string_view {
  return kind == SimilarityKind::WeightedIbs ? "weighted-ibs" : "exp-distance";
}

auto parse_similarity_kind(std::string_view text) -> SimilarityKind {
  if (text == "weighted-ibs") return SimilarityKind::WeightedIbs;
  if (text == "exp-distance") return SimilarityKind::ExpDistance;
  throw InputError("unknown kernel '" + std::string(text) + "'");
}

auto weighted_ibs(const GenotypeMatrix& g, const MafVector& maf) -> SimilarityMatrix {
  if (g.has_missing()) throw InputError("similarity requires complete genotypes");
  if (maf.size() != g.n_variants()) throw InputError("allele frequencies not aligned with variants");
  const Index n = g.n_samples();
  const Index n_var = g.n_variants();

  Eigen::VectorXd weight(n_var);
  for (Index p = 0; p < n_var; ++p) {
    const double m = maf.minor(p);
    if (!(m > 0.0)) throw InputError("monomorphic variant in similarity");
    weight(p) = 1.0 / std::sqrt(m * (1.0 - m));
  }
  const double upsilon = 2.0 * weight.sum();

  // Row-major copy so each pair walks contiguous memory.
  const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows =
      g.values();
  SimilarityMatrix out{Eigen::MatrixXd::Identity(n, n), SimilarityKind::WeightedIbs};
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i) {
    const std::uint8_t* gi = rows.data() + i * n_var;
    for (Index j = i + 1; j < n; ++j) {
      const std::uint8_t* gj = rows.data() + j * n_var;
      double acc = 0.0;
      for (Index p = 0; p < n_var; ++p) {
        acc += (2 - std::abs(static_cast<int>(gi[p]) - static_cast<int>(gj[p]))) * weight(p);
      }
      const double w = acc / upsilon;
      out.w(i, j) = w;
      out.w(j, i) = w;
    }
  }
  return out;
}

auto exp_distance_similarity(const GenotypeMatrix& g, double scale) -> SimilarityMatrix {
  if (g.has_missing()) throw InputError("similarity requires complete genotypes");
  if (!(scale > 0.0)) throw InputError("distance scale must be positive");
  const Index n = g.n_samples();
  const Eigen::MatrixXd d = g.dosages();
  SimilarityMatrix out{Eigen::MatrixXd::Identity(n, n), SimilarityKind::ExpDistance};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double w = std::exp(-(d.row(i) - d.row(j)).norm() / scale);
      out.w(i, j) = w;
      out.w(j, i) = w;
    }
  }
  return out;
}

}  // namespace wuseq
