#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wuseq/genotype.hpp"

namespace wuseq {

// Tab-separated files. Genotypes: header `sample_id<TAB>var1...`, rows of
// {0,1,2,NA}. Phenotypes: `sample_id<TAB>value`, optional header. Covariates:
// header `sample_id<TAB>name1...`, J numeric columns.
auto read_genotypes(std::istream& in) -> GenotypeMatrix;
auto load_genotypes(const std::filesystem::path& path) -> GenotypeMatrix;

auto read_phenotypes(std::istream& in) -> PhenotypeVector;
auto load_phenotypes(const std::filesystem::path& path) -> PhenotypeVector;

struct CovariateTable {
  Eigen::MatrixXd values;
  std::vector<std::string> names;
  std::vector<std::string> sample_ids;
};

auto read_covariates(std::istream& in) -> CovariateTable;
auto load_covariates(const std::filesystem::path& path) -> CovariateTable;

// Variant id -> region name. Two columns `variant_id<TAB>region`.
using RegionMap = std::map<std::string, std::vector<std::string>>;
auto load_region_map(const std::filesystem::path& path) -> RegionMap;

void write_genotypes(std::ostream& out, const GenotypeMatrix& g);
void write_phenotypes(std::ostream& out, const PhenotypeVector& y);
void write_covariates(std::ostream& out, const CovariateTable& x);

// Reorders `y` to follow `sample_ids`. Every id must be present.
auto align_phenotypes(const PhenotypeVector& y, const std::vector<std::string>& sample_ids)
    -> Eigen::VectorXd;
auto align_covariates(const CovariateTable& x, const std::vector<std::string>& sample_ids)
    -> CovariateMatrix;

// Shortest decimal text that reads back to the same double.
auto format_double(double v) -> std::string;

}  // namespace wuseq
