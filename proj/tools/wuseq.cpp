// wuseq: association testing, simulation studies and null-distribution checks.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure. Errors are
// written to stderr as a single JSON object {"error": {"kind", "message"}}.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wuseq/error.hpp"
#include "wuseq/io.hpp"
#include "wuseq/nulldist.hpp"
#include "wuseq/pipeline.hpp"
#include "wuseq/report.hpp"
#include "wuseq/scenario.hpp"
#include "wuseq/simulate.hpp"
#include "wuseq/toydata.hpp"

namespace {

using namespace wuseq;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct AssocArgs {
  std::string genotypes;
  std::string phenotypes;
  std::string covariates;
  std::string regions;
  double maf = 0.03;
  std::string kernel = "weighted-ibs";
  double distance_scale = 1.0;
  std::string transform = "quantile";
  std::string norm = "L2";
  std::size_t permutations = 0;
  std::uint64_t seed = 1;
  std::string output;
  bool json = false;
};

struct SimulateArgs {
  std::string scenario;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string output;
  bool json = false;
};

struct NullcheckArgs {
  std::string weights_file;
  std::vector<double> grid;
  std::size_t draws = 1000000;
  std::uint64_t seed = 1;
  bool json = false;
};

struct ToydataArgs {
  std::string out = "data/toy";
  std::uint64_t seed = 20240611;
};

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw InputError("cannot write '" + output + "'");
  out << text;
}

auto cmd_assoc(const AssocArgs& a) -> int {
  AssocOptions o;
  o.maf_threshold = a.maf;
  o.kernel = parse_similarity_kind(a.kernel);
  o.distance_scale = a.distance_scale;
  o.transform = parse_transform(a.transform);
  o.norm = parse_norm(a.norm);
  o.permutations = a.permutations;
  o.seed = a.seed;

  const auto g = load_genotypes(a.genotypes);
  const auto y = align_phenotypes(load_phenotypes(a.phenotypes), g.sample_ids());
  std::optional<CovariateMatrix> x;
  if (!a.covariates.empty()) x = align_covariates(load_covariates(a.covariates), g.sample_ids());
  std::optional<RegionMap> regions;
  if (!a.regions.empty()) regions = load_region_map(a.regions);

  const auto report = analyse_regions(g, y, x, regions, o);
  const bool any_ok = std::any_of(report.rows.begin(), report.rows.end(),
                                  [](const AssocRow& r) { return !r.error; });
  if (!any_ok) throw InputError("no region could be tested: " + *report.rows.front().error);

  std::ostringstream out;
  if (a.json) {
    out << assoc_json(report).dump(2) << '\n';
  } else {
    write_assoc_tsv(out, report);
  }
  emit(a.output, out.str());
  return 0;
}

auto cmd_simulate(const SimulateArgs& a) -> int {
  Scenario s = load_scenario(a.scenario);
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("override '" + kv + "' is not key=value");
    apply_scenario_key(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.replicates) s.replicates = *a.replicates;
  if (a.seed) s.seed = *a.seed;
  s.validate();

  const auto report = run_study(s, make_pool(s));
  std::ostringstream out;
  if (a.json) {
    out << study_json(report).dump(2) << '\n';
  } else {
    write_study_tsv(out, report);
  }
  emit(a.output, out.str());
  return 0;
}

auto read_weights(const std::string& path) -> std::vector<double> {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<double> w;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InputError("invalid weight '" + token + "'");
    }
    if (!std::isfinite(v)) throw InputError("weights must be finite");
    w.push_back(v);
  }
  if (w.empty()) throw InputError("empty weights");
  return w;
}

auto cmd_nullcheck(const NullcheckArgs& a) -> int {
  MixtureSpec spec;
  for (double v : read_weights(a.weights_file)) {
    if (v != 0.0) spec.lambdas.push_back(v);
  }
  if (spec.empty()) throw InputError("empty weights");
  const auto mc = mixture_tail_monte_carlo(spec, a.grid, a.draws, a.seed);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream out;
  if (!a.json) out << "t\tp_davies\tp_monte_carlo\tmc_se\tdifference\n";
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    const double p = mixture_tail_probability(spec, a.grid[k]).p;
    const double diff = p - mc[k].p;
    if (a.json) {
      rows.push_back({{"t", a.grid[k]},
                      {"p_davies", p},
                      {"p_monte_carlo", mc[k].p},
                      {"mc_se", mc[k].standard_error},
                      {"difference", diff}});
    } else {
      out << format_double(a.grid[k]) << '\t' << format_double(p) << '\t'
          << format_double(mc[k].p) << '\t' << format_double(mc[k].standard_error) << '\t'
          << format_double(diff) << '\n';
    }
  }
  if (a.json) {
    out << nlohmann::ordered_json{{"draws", a.draws}, {"seed", a.seed}, {"results", rows}}.dump(2)
        << '\n';
  }
  std::cout << out.str();
  return 0;
}

auto cmd_toydata(const ToydataArgs& a) -> int {
  const auto suite = generate_toy_suite(a.seed);
  write_toy_suite(suite, a.seed, a.out);
  std::cout << "wrote " << suite.datasets.size() << " datasets and " << suite.records.size()
            << " oracle records to " << a.out << "; null calibration "
            << suite.calibration.above_level << "/" << suite.calibration.seeds << "\n";
  return 0;
}

auto error_json(std::string_view kind, const std::string& message,
                std::optional<double> best = std::nullopt) -> std::string {
  nlohmann::ordered_json e = {{"kind", kind}, {"message", message}};
  if (best) e["best_estimate"] = *best;
  return nlohmann::ordered_json{{"error", e}}.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-variant association testing with weighted U statistics"};
  app.require_subcommand(1);

  AssocArgs assoc;
  auto* a = app.add_subcommand("assoc", "Test genotype/phenotype association");
  a->add_option("--genotypes,-g", assoc.genotypes, "Genotype TSV")->required();
  a->add_option("--phenotypes,-p", assoc.phenotypes, "Phenotype TSV")->required();
  a->add_option("--covariates,-x", assoc.covariates, "Covariate TSV");
  a->add_option("--regions", assoc.regions, "Variant-to-region map TSV");
  a->add_option("--maf", assoc.maf, "MAF threshold (kept: 0 < maf < threshold)");
  a->add_option("--kernel", assoc.kernel, "weighted-ibs | exp-distance");
  a->add_option("--distance-scale", assoc.distance_scale, "Scale of the exp-distance kernel");
  a->add_option("--transform", assoc.transform, "quantile | rank");
  a->add_option("--norm", assoc.norm, "Scaling constant norm: L1 | L2");
  a->add_option("--permutations", assoc.permutations, "Permutations (0 = asymptotic only)");
  a->add_option("--seed", assoc.seed, "Master seed");
  a->add_option("--output,-o", assoc.output, "Output path (default stdout)");
  a->add_flag("--json", assoc.json, "JSON instead of TSV");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a simulation study from a scenario file");
  s->add_option("scenario", sim.scenario, "Scenario file")->required();
  s->add_option("--replicates", sim.replicates, "Override the replicate count");
  s->add_option("--seed", sim.seed, "Override the master seed");
  s->add_option("--set", sim.overrides, "Override a scenario key (key=value)");
  s->add_option("--output,-o", sim.output, "Output path (default stdout)");
  s->add_flag("--json", sim.json, "JSON instead of TSV");

  NullcheckArgs null;
  auto* n = app.add_subcommand("nullcheck", "Tail probabilities of a chi-squared mixture");
  n->add_option("weights", null.weights_file, "File of mixture weights")->required();
  n->add_option("--t", null.grid, "Thresholds")->required()->delimiter(',');
  n->add_option("--draws", null.draws, "Monte-Carlo draws");
  n->add_option("--seed", null.seed, "Monte-Carlo seed");
  n->add_flag("--json", null.json, "JSON instead of TSV");

  ToydataArgs toy;
  auto* t = app.add_subcommand("toydata", "Regenerate the bundled toy datasets and oracles");
  t->add_option("--out", toy.out, "Output directory");
  t->add_option("--seed", toy.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("input", e.what()) << '\n';
    return kExitInput;
  }

  try {
    if (*a) return cmd_assoc(assoc);
    if (*s) return cmd_simulate(sim);
    if (*n) return cmd_nullcheck(null);
    if (*t) return cmd_toydata(toy);
  } catch (const InputError& e) {
    std::cerr << error_json("input", e.what()) << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << error_json("numerical", e.what(), e.best_estimate()) << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << error_json("input", e.what()) << '\n';
    return kExitInput;
  }
  return 0;
}
