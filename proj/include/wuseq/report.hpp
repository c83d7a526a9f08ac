#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wuseq/io.hpp"
#include "wuseq/pipeline.hpp"
#include "wuseq/simulate.hpp"

namespace wuseq {

// One analysed region of an association run.
// One analysed region of an association run; `error` is set instead of a
// meaningful outcome when the region could not be tested.
struct AssocRow {
  std::string region;
  AssocOutcome outcome;
  std::optional<std::string> error;
};

struct AssocReport {
  std::vector<AssocRow> rows;
  AssocOptions options;
};

// Every region of `regions` (variant ids absent from `g` raise InputError),
// followed by the pooled region "all" over the union of mapped variants. With
// no map, one region "all" holds every variant. Rows are sorted by region name
// with "all" last.
auto analyse_regions(const GenotypeMatrix& g, const Eigen::VectorXd& y,
                     const std::optional<CovariateMatrix>& x,
                     const std::optional<RegionMap>& regions, const AssocOptions& options)
    -> AssocReport;

void write_assoc_tsv(std::ostream& out, const AssocReport& report);
auto assoc_json(const AssocReport& report) -> nlohmann::ordered_json;

// Columns: scenario, method, replicates, alpha, rejection_rate, se, failures, seed.
void write_study_tsv(std::ostream& out, const StudyReport& report);
auto study_json(const StudyReport& report) -> nlohmann::ordered_json;

}  // namespace wuseq
