#include "wuseq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "wuseq/error.hpp"

namespace wuseq {

namespace {

auto split_tabs(const std::string& line) -> std::vector<std::string> {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Reads the next non-empty line, stripping a trailing '\r'.
auto next_line(std::istream& in, std::string& line) -> bool {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

auto parse_double(const std::string& token, double& out) -> bool {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

auto open_input(const std::filesystem::path& path) -> std::ifstream {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

auto line_context(std::size_t line_no) -> std::string {
  return " (line " + std::to_string(line_no) + ")";
}

}  // namespace

auto read_genotypes(std::istream& in) -> GenotypeMatrix {
  std::string line;
  if (!next_line(in, line)) throw InputError("genotype file is empty");
  auto header = split_tabs(line);
  if (header.size() < 2) throw InputError("genotype header needs sample_id and at least one variant");
  std::vector<std::string> variant_ids(header.begin() + 1, header.end());
  const auto n_var = static_cast<Index>(variant_ids.size());

  std::vector<std::string> sample_ids;
  std::vector<std::uint8_t> cells;
  std::vector<bool> missing;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    auto fields = split_tabs(line);
    if (static_cast<Index>(fields.size()) != n_var + 1) {
      throw InputError("row width mismatch" + line_context(line_no));
    }
    sample_ids.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto& tok = fields[k];
      if (tok == "NA") {
        cells.push_back(0);
        missing.push_back(true);
      } else if (tok == "0" || tok == "1" || tok == "2") {
        cells.push_back(static_cast<std::uint8_t>(tok[0] - '0'));
        missing.push_back(false);
      } else {
        throw InputError("invalid genotype token '" + tok + "'" + line_context(line_no));
      }
    }
  }
  const auto n = static_cast<Index>(sample_ids.size());
  GenotypeMatrix::Values values(n, n_var);
  GenotypeMatrix::Mask mask(n, n_var);
  for (Index i = 0; i < n; ++i) {
    for (Index p = 0; p < n_var; ++p) {
      const auto k = static_cast<std::size_t>(i * n_var + p);
      values(i, p) = cells[k];
      mask(i, p) = missing[k];
    }
  }
  return {std::move(values), std::move(mask), std::move(sample_ids), std::move(variant_ids)};
}

auto load_genotypes(const std::filesystem::path& path) -> GenotypeMatrix {
  auto in = open_input(path);
  return read_genotypes(in);
}

auto read_phenotypes(std::istream& in) -> PhenotypeVector {
  std::vector<std::string> ids;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    auto fields = split_tabs(line);
    if (fields.size() != 2) throw InputError("phenotype rows need 2 columns" + line_context(line_no));
    double v = 0.0;
    if (!parse_double(fields[1], v)) {
      if (line_no == 1 && fields[1] != "NA") continue;  // header
      throw InputError("invalid phenotype value '" + fields[1] + "'" + line_context(line_no));
    }
    ids.push_back(fields[0]);
    values.push_back(v);
  }
  if (ids.empty()) throw InputError("phenotype file has no rows");
  PhenotypeVector out{Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Index>(values.size())),
                      std::move(ids)};
  return out;
}

auto load_phenotypes(const std::filesystem::path& path) -> PhenotypeVector {
  auto in = open_input(path);
  return read_phenotypes(in);
}

auto read_covariates(std::istream& in) -> CovariateTable {
  std::string line;
  if (!next_line(in, line)) throw InputError("covariate file is empty");
  auto header = split_tabs(line);
  if (header.size() < 2) throw InputError("covariate header needs sample_id and at least one column");
  CovariateTable out;
  out.names.assign(header.begin() + 1, header.end());
  const auto j = out.names.size();
  std::vector<double> cells;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    auto fields = split_tabs(line);
    if (fields.size() != j + 1) throw InputError("row width mismatch" + line_context(line_no));
    out.sample_ids.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      if (!parse_double(fields[k], v)) {
        throw InputError("invalid covariate value '" + fields[k] + "'" + line_context(line_no));
      }
      cells.push_back(v);
    }
  }
  const auto n = static_cast<Index>(out.sample_ids.size());
  out.values.resize(n, static_cast<Index>(j));
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < static_cast<Index>(j); ++c) {
      out.values(i, c) = cells[static_cast<std::size_t>(i) * j + static_cast<std::size_t>(c)];
    }
  }
  return out;
}

auto load_covariates(const std::filesystem::path& path) -> CovariateTable {
  auto in = open_input(path);
  return read_covariates(in);
}

auto load_region_map(const std::filesystem::path& path) -> RegionMap {
  auto in = open_input(path);
  RegionMap regions;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    auto fields = split_tabs(line);
    if (fields.size() != 2) throw InputError("region map rows need 2 columns" + line_context(line_no));
    if (line_no == 1 && fields[0] == "variant_id") continue;
    regions[fields[1]].push_back(fields[0]);
  }
  if (regions.empty()) throw InputError("region map is empty");
  return regions;
}

void write_genotypes(std::ostream& out, const GenotypeMatrix& g) {
  out << "sample_id";
  for (const auto& id : g.variant_ids()) out << '\t' << id;
  out << '\n';
  for (Index i = 0; i < g.n_samples(); ++i) {
    out << g.sample_ids()[static_cast<std::size_t>(i)];
    for (Index p = 0; p < g.n_variants(); ++p) {
      out << '\t';
      if (g.is_missing(i, p)) {
        out << "NA";
      } else {
        out << g(i, p);
      }
    }
    out << '\n';
  }
}

void write_phenotypes(std::ostream& out, const PhenotypeVector& y) {
  out << "sample_id\tvalue\n";
  for (Index i = 0; i < y.size(); ++i) {
    out << y.sample_ids[static_cast<std::size_t>(i)] << '\t' << format_double(y.y(i)) << '\n';
  }
}

void write_covariates(std::ostream& out, const CovariateTable& x) {
  out << "sample_id";
  for (const auto& name : x.names) out << '\t' << name;
  out << '\n';
  for (Index i = 0; i < x.values.rows(); ++i) {
    out << x.sample_ids[static_cast<std::size_t>(i)];
    for (Index c = 0; c < x.values.cols(); ++c) out << '\t' << format_double(x.values(i, c));
    out << '\n';
  }
}

namespace {

auto index_of(const std::vector<std::string>& ids) -> std::unordered_map<std::string, Index> {
  std::unordered_map<std::string, Index> pos;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!pos.emplace(ids[k], static_cast<Index>(k)).second) {
      throw InputError("duplicate sample id '" + ids[k] + "'");
    }
  }
  return pos;
}

}  // namespace

auto align_phenotypes(const PhenotypeVector& y, const std::vector<std::string>& sample_ids)
    -> Eigen::VectorXd {
  const auto pos = index_of(y.sample_ids);
  Eigen::VectorXd out(static_cast<Index>(sample_ids.size()));
  for (std::size_t k = 0; k < sample_ids.size(); ++k) {
    auto it = pos.find(sample_ids[k]);
    if (it == pos.end()) throw InputError("no phenotype for sample '" + sample_ids[k] + "'");
    out(static_cast<Index>(k)) = y.y(it->second);
  }
  return out;
}

auto align_covariates(const CovariateTable& x, const std::vector<std::string>& sample_ids)
    -> CovariateMatrix {
  const auto pos = index_of(x.sample_ids);
  Eigen::MatrixXd out(static_cast<Index>(sample_ids.size()), x.values.cols());
  for (std::size_t k = 0; k < sample_ids.size(); ++k) {
    auto it = pos.find(sample_ids[k]);
    if (it == pos.end()) throw InputError("no covariates for sample '" + sample_ids[k] + "'");
    out.row(static_cast<Index>(k)) = x.values.row(it->second);
  }
  return CovariateMatrix(out, x.names);
}

auto format_double(double v) -> std::string {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace wuseq
