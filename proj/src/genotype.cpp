#include "wuseq/genotype.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include "wuseq/error.hpp"
#include "wuseq/random.hpp"

namespace wuseq {

namespace {

auto numbered_ids(const char* prefix, Index count) -> std::vector<std::string> {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) ids.push_back(prefix + std::to_string(k + 1));
  return ids;
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw InputError(std::string("duplicate ") + what + " id '" + id + "'");
    }
  }
}

}  // namespace

GenotypeMatrix::GenotypeMatrix(Values values, Mask missing, std::vector<std::string> sample_ids,
                               std::vector<std::string> variant_ids)
    : values_(std::move(values)),
      missing_(std::move(missing)),
      sample_ids_(std::move(sample_ids)),
      variant_ids_(std::move(variant_ids)) {
  if (values_.rows() < 2) throw InputError("genotype matrix needs at least 2 samples");
  if (values_.cols() < 1) throw InputError("genotype matrix needs at least 1 variant");
  if (missing_.rows() != values_.rows() || missing_.cols() != values_.cols()) {
    throw InputError("missingness mask shape does not match genotype values");
  }
  if (static_cast<Index>(sample_ids_.size()) != values_.rows() ||
      static_cast<Index>(variant_ids_.size()) != values_.cols()) {
    throw InputError("id count does not match genotype matrix shape");
  }
  for (Index p = 0; p < values_.cols(); ++p) {
    for (Index i = 0; i < values_.rows(); ++i) {
      if (missing_(i, p)) {
        values_(i, p) = 0;
      } else if (values_(i, p) > 2) {
        throw InputError("genotype value outside {0,1,2}");
      }
    }
  }
  require_unique(sample_ids_, "sample");
  require_unique(variant_ids_, "variant");
}

GenotypeMatrix::GenotypeMatrix(Values values)
    : GenotypeMatrix(values, Mask::Constant(values.rows(), values.cols(), false),
                     numbered_ids("s", values.rows()), numbered_ids("v", values.cols())) {}

auto GenotypeMatrix::select_variants(std::span<const Index> columns) const -> GenotypeMatrix {
  Values v(values_.rows(), static_cast<Index>(columns.size()));
  Mask m(values_.rows(), static_cast<Index>(columns.size()));
  std::vector<std::string> ids;
  ids.reserve(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto c = columns[k];
    v.col(static_cast<Index>(k)) = values_.col(c);
    m.col(static_cast<Index>(k)) = missing_.col(c);
    ids.push_back(variant_ids_[static_cast<std::size_t>(c)]);
  }
  return {std::move(v), std::move(m), sample_ids_, std::move(ids)};
}

auto GenotypeMatrix::select_samples(std::span<const Index> rows) const -> GenotypeMatrix {
  Values v(static_cast<Index>(rows.size()), values_.cols());
  Mask m(static_cast<Index>(rows.size()), values_.cols());
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = rows[k];
    v.row(static_cast<Index>(k)) = values_.row(r);
    m.row(static_cast<Index>(k)) = missing_.row(r);
    ids.push_back(sample_ids_[static_cast<std::size_t>(r)]);
  }
  return {std::move(v), std::move(m), std::move(ids), variant_ids_};
}

auto GenotypeMatrix::flipped() const -> GenotypeMatrix {
  Values v = values_;
  for (Index p = 0; p < v.cols(); ++p) {
    for (Index i = 0; i < v.rows(); ++i) {
      if (!missing_(i, p)) v(i, p) = static_cast<std::uint8_t>(2 - v(i, p));
    }
  }
  return {std::move(v), missing_, sample_ids_, variant_ids_};
}

auto compute_maf(const GenotypeMatrix& g) -> MafVector {
  MafVector out{Eigen::VectorXd(g.n_variants()), Eigen::VectorXd(g.n_variants())};
  for (Index p = 0; p < g.n_variants(); ++p) {
    long alleles = 0;
    long observed = 0;
    for (Index i = 0; i < g.n_samples(); ++i) {
      if (g.is_missing(i, p)) continue;
      alleles += g(i, p);
      ++observed;
    }
    if (observed == 0) {
      throw InputError("variant '" + g.variant_ids()[static_cast<std::size_t>(p)] +
                       "' has no observed genotypes");
    }
    const double f = static_cast<double>(alleles) / (2.0 * static_cast<double>(observed));
    out.alt(p) = f;
    out.minor(p) = std::min(f, 1.0 - f);
  }
  return out;
}

auto impute_missing(const GenotypeMatrix& g, const MafVector& maf, std::uint64_t seed)
    -> GenotypeMatrix {
  if (maf.size() != g.n_variants()) throw InputError("allele frequencies not aligned with variants");
  if (!g.has_missing()) return g;

  auto rng = make_rng(seed);
  GenotypeMatrix::Values v = g.values();
  for (Index p = 0; p < g.n_variants(); ++p) {
    const double f = maf.alt(p);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw InputError("variant '" + g.variant_ids()[static_cast<std::size_t>(p)] +
                       "' has no allele frequency estimate");
    }
    std::binomial_distribution<int> draw(2, f);
    for (Index i = 0; i < g.n_samples(); ++i) {
      if (g.is_missing(i, p)) v(i, p) = static_cast<std::uint8_t>(draw(rng));
    }
  }
  auto complete = GenotypeMatrix::Mask::Constant(v.rows(), v.cols(), false).eval();
  return {std::move(v), std::move(complete), g.sample_ids(), g.variant_ids()};
}

auto filter_by_maf(const GenotypeMatrix& g, const MafVector& maf, double threshold)
    -> GenotypeMatrix {
  if (!(threshold > 0.0 && threshold <= 0.5)) throw InputError("MAF threshold must be in (0, 0.5]");
  if (maf.size() != g.n_variants()) throw InputError("allele frequencies not aligned with variants");
  std::vector<Index> keep;
  for (Index p = 0; p < g.n_variants(); ++p) {
    if (maf.minor(p) > 0.0 && maf.minor(p) < threshold) keep.push_back(p);
  }
  if (keep.empty()) throw InputError("no polymorphic variants below threshold");
  return g.select_variants(keep);
}

CovariateMatrix::CovariateMatrix(const Eigen::MatrixXd& covariates, std::vector<std::string> names)
    : x_(covariates.rows(), covariates.cols() + 1), names_(std::move(names)) {
  if (!covariates.allFinite()) throw InputError("covariates must be finite");
  if (names_.empty()) {
    for (Index j = 0; j < covariates.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Index>(names_.size()) != covariates.cols()) {
    throw InputError("covariate name count does not match columns");
  }
  x_.col(0).setOnes();
  x_.rightCols(covariates.cols()) = covariates;
}

auto CovariateMatrix::intercept_only(Index n) -> CovariateMatrix {
  return CovariateMatrix(Eigen::MatrixXd(n, 0));
}

}  // namespace wuseq
