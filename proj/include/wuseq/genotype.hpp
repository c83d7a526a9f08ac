#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wuseq {

using Index = Eigen::Index;

// n x P allele counts in {0,1,2} plus a missingness mask. Values under a
// set mask bit are unspecified (stored as 0).
class GenotypeMatrix {
 public:
  using Values = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
  using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  GenotypeMatrix(Values values, Mask missing, std::vector<std::string> sample_ids,
                 std::vector<std::string> variant_ids);

  // Complete matrix with generated ids ("s1".., "v1"..).
  explicit GenotypeMatrix(Values values);

  auto n_samples() const -> Index { return values_.rows(); }
  auto n_variants() const -> Index { return values_.cols(); }
  auto values() const -> const Values& { return values_; }
  auto missing() const -> const Mask& { return missing_; }
  auto sample_ids() const -> const std::vector<std::string>& { return sample_ids_; }
  auto variant_ids() const -> const std::vector<std::string>& { return variant_ids_; }

  auto operator()(Index i, Index p) const -> int { return values_(i, p); }
  auto is_missing(Index i, Index p) const -> bool { return missing_(i, p); }
  auto has_missing() const -> bool { return missing_.any(); }

  auto select_variants(std::span<const Index> columns) const -> GenotypeMatrix;
  auto select_samples(std::span<const Index> rows) const -> GenotypeMatrix;

  // 2 - g at every non-missing cell.
  auto flipped() const -> GenotypeMatrix;

  auto dosages() const -> Eigen::MatrixXd { return values_.cast<double>(); }

 private:
  Values values_;
  Mask missing_;
  std::vector<std::string> sample_ids_;
  std::vector<std::string> variant_ids_;
};

// Per-variant allele frequencies. `alt` is the frequency of the counted
// allele; `minor` is its fold min(alt, 1 - alt).
struct MafVector {
  Eigen::VectorXd minor;
  Eigen::VectorXd alt;

  auto size() const -> Index { return minor.size(); }
};

auto compute_maf(const GenotypeMatrix& g) -> MafVector;

// Fills missing cells with Binomial(2, alt_p) draws.
auto impute_missing(const GenotypeMatrix& g, const MafVector& maf, std::uint64_t seed)
    -> GenotypeMatrix;

// Keeps variants with 0 < maf < threshold.
auto filter_by_maf(const GenotypeMatrix& g, const MafVector& maf, double threshold)
    -> GenotypeMatrix;

// Phenotype values with their sample labels.
struct PhenotypeVector {
  Eigen::VectorXd y;
  std::vector<std::string> sample_ids;

  auto size() const -> Index { return y.size(); }
};

// n x (J+1) design; column 0 is the intercept.
class CovariateMatrix {
 public:
  // `covariates` holds the J raw columns; the intercept is prepended.
  explicit CovariateMatrix(const Eigen::MatrixXd& covariates,
                           std::vector<std::string> names = {});

  static auto intercept_only(Index n) -> CovariateMatrix;

  auto design() const -> const Eigen::MatrixXd& { return x_; }
  auto n_samples() const -> Index { return x_.rows(); }
  auto n_covariates() const -> Index { return x_.cols() - 1; }
  auto names() const -> const std::vector<std::string>& { return names_; }

 private:
  Eigen::MatrixXd x_;
  std::vector<std::string> names_;
};

}  // namespace wuseq
