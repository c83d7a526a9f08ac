#include "wuseq/report.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "wuseq/error.hpp"
#include "wuseq/io.hpp"

namespace wuseq {

namespace {

auto optional_number(const std::optional<double>& v) -> std::string {
  return v ? format_double(*v) : std::string("NA");
}

auto join_warnings(const std::vector<std::string>& warnings) -> std::string {
  if (warnings.empty()) return "-";
  std::string out;
  for (const auto& w : warnings) {
    if (!out.empty()) out += "; ";
    out += w;
  }
  return out;
}

}  // namespace

auto analyse_regions(const GenotypeMatrix& g, const Eigen::VectorXd& y,
                     const std::optional<CovariateMatrix>& x,
                     const std::optional<RegionMap>& regions, const AssocOptions& options)
    -> AssocReport {
  AssocReport report;
  report.options = options;
  if (!regions) {
    report.rows.push_back({"all", run_association(g, y, x, options), std::nullopt});
    return report;
  }

  std::map<std::string, Index> column;
  for (std::size_t p = 0; p < g.variant_ids().size(); ++p) {
    column.emplace(g.variant_ids()[p], static_cast<Index>(p));
  }
  std::vector<std::pair<std::string, std::vector<Index>>> groups;
  std::set<Index> pooled;
  for (const auto& [name, ids] : *regions) {
    if (name == "all") throw InputError("region name 'all' is reserved for the pooled test");
    std::vector<Index> cols;
    for (const auto& id : ids) {
      auto it = column.find(id);
      if (it == column.end()) {
        throw InputError("region '" + name + "' lists unknown variant '" + id + "'");
      }
      cols.push_back(it->second);
      pooled.insert(it->second);
    }
    groups.emplace_back(name, std::move(cols));
  }
  groups.emplace_back("all", std::vector<Index>(pooled.begin(), pooled.end()));

  report.rows.resize(groups.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < groups.size(); ++k) {
    auto& row = report.rows[k];
    row.region = groups[k].first;
    try {
      row.outcome = run_association(g.select_variants(groups[k].second), y, x, options);
    } catch (const InputError& e) {
      row.error = e.what();
    }
  }
  return report;
}

void write_assoc_tsv(std::ostream& out, const AssocReport& report) {
  out << "region\tn\tP_retained\tstatistic\tp_asymptotic\tp_permutation\tc\tnorm\t"
         "eigen_sum\ttruncated_eigenvalues\twarnings\tseed\n";
  for (const auto& row : report.rows) {
    if (row.error) {
      out << row.region << "\tNA\tNA\tNA\tNA\tNA\tNA\t" << to_string(report.options.norm)
          << "\tNA\tNA\t" << *row.error << '\t' << report.options.seed << '\n';
      continue;
    }
    const auto& o = row.outcome;
    const std::optional<double> perm = o.result.p_permutation;
    out << row.region << '\t' << o.n << '\t' << o.variants_retained << '\t'
        << format_double(o.result.statistic) << '\t' << format_double(o.result.p_asymptotic)
        << '\t' << optional_number(perm) << '\t' << format_double(o.c.value) << '\t'
        << to_string(o.c.norm) << '\t' << format_double(o.result.diagnostics.eigen_sum) << '\t'
        << o.result.diagnostics.truncated_eigenvalues << '\t'
        << join_warnings(o.result.diagnostics.warnings) << '\t' << report.options.seed << '\n';
  }
}

auto assoc_json(const AssocReport& report) -> nlohmann::ordered_json {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    const auto& o = row.outcome;
    nlohmann::ordered_json j;
    j["region"] = row.region;
    if (row.error) {
      j["error"] = *row.error;
      j["seed"] = report.options.seed;
      rows.push_back(std::move(j));
      continue;
    }
    j["n"] = o.n;
    j["P_retained"] = o.variants_retained;
    j["statistic"] = o.result.statistic;
    j["p_asymptotic"] = o.result.p_asymptotic;
    if (o.result.p_permutation) {
      j["p_permutation"] = *o.result.p_permutation;
      j["n_permutations"] = *o.result.n_permutations;
    } else {
      j["p_permutation"] = nullptr;
    }
    j["c"] = o.c.value;
    j["norm"] = std::string(to_string(o.c.norm));
    j["diagnostics"] = {
        {"eigen_sum", o.result.diagnostics.eigen_sum},
        {"truncated_eigenvalues", o.result.diagnostics.truncated_eigenvalues},
        {"tail_error_bound", o.result.diagnostics.tail_error_bound},
        {"null_scale", o.result.diagnostics.null_scale},
        {"c_clamped", o.c.clamped},
        {"warnings", o.result.diagnostics.warnings},
    };
    j["seed"] = report.options.seed;
    rows.push_back(std::move(j));
  }
  return {{"results", std::move(rows)}};
}

void write_study_tsv(std::ostream& out, const StudyReport& report) {
  out << "scenario\tmethod\treplicates\talpha\trejection_rate\tse\tfailures\tseed\n";
  for (const auto& m : report.methods) {
    out << report.scenario.name << '\t' << m.method << '\t' << m.replicates << '\t'
        << format_double(report.scenario.level) << '\t' << format_double(m.rejection_rate) << '\t'
        << format_double(m.se) << '\t' << m.failures << '\t' << report.scenario.seed << '\n';
  }
}

auto study_json(const StudyReport& report) -> nlohmann::ordered_json {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& m : report.methods) {
    rows.push_back({
        {"scenario", report.scenario.name},
        {"method", m.method},
        {"replicates", m.replicates},
        {"evaluated", m.evaluated},
        {"alpha", report.scenario.level},
        {"rejection_rate", m.rejection_rate},
        {"se", m.se},
        {"failures", m.failures},
        {"seed", report.scenario.seed},
    });
  }
  return {{"results", std::move(rows)}};
}

}  // namespace wuseq
