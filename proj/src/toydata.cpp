#include "wuseq/toydata.hpp"

#include <fstream>
#include <sstream>

#include "wuseq/error.hpp"
#include "wuseq/random.hpp"
#include "wuseq/scenario.hpp"
#include "wuseq/simulate.hpp"

namespace wuseq {

auto toy_id(ToyKind kind) -> std::string {
  switch (kind) {
    case ToyKind::NullGaussian: return "null-gaussian";
    case ToyKind::PlantedGaussian: return "planted-gaussian";
    case ToyKind::PlantedCauchy: return "planted-cauchy";
    case ToyKind::BinaryCovariates: return "binary-covariates";
  }
  return "?";
}

auto all_toy_kinds() -> std::vector<ToyKind> {
  return {ToyKind::NullGaussian, ToyKind::PlantedGaussian, ToyKind::PlantedCauchy,
          ToyKind::BinaryCovariates};
}

auto to_json(const OracleRecord& r) -> nlohmann::ordered_json {
  return {{"dataset", r.dataset},           {"method", r.method},
          {"statistic", r.statistic},       {"p_asymptotic", r.p_asymptotic},
          {"p_permutation", r.p_permutation}, {"permutations", r.permutations},
          {"seed", r.seed}};
}

auto oracle_from_json(const nlohmann::ordered_json& j) -> OracleRecord {
  OracleRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.statistic = j.at("statistic").get<double>();
  r.p_asymptotic = j.at("p_asymptotic").get<double>();
  r.p_permutation = j.at("p_permutation").get<double>();
  r.permutations = j.at("permutations").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

auto toy_options(std::uint64_t seed, std::size_t permutations) -> AssocOptions {
  AssocOptions o;
  o.permutations = permutations;
  o.seed = seed;
  return o;
}

namespace {

auto toy_scenario(ToyKind kind, double mu_beta) -> Scenario {
  Scenario s;
  s.name = toy_id(kind);
  s.n = kToySamples;
  s.n_variants = kToyVariants;
  s.mu_beta = mu_beta;
  s.sigma_beta = 0.25 * mu_beta > 0.0 ? 0.25 * mu_beta : 0.1;
  switch (kind) {
    case ToyKind::NullGaussian:
      s.effect_mode = EffectMode::Null;
      break;
    case ToyKind::PlantedGaussian:
      s.effect_mode = EffectMode::DeleteriousMajority;
      break;
    case ToyKind::PlantedCauchy:
      s.family = PhenotypeFamily::Cauchy;
      s.effect_mode = EffectMode::DeleteriousMajority;
      break;
    case ToyKind::BinaryCovariates:
      s.family = PhenotypeFamily::BinaryLogistic;
      s.effect_mode = EffectMode::DeleteriousMajority;
      s.with_covariates = true;
      break;
  }
  return s;
}

auto build_dataset(ToyKind kind, double mu_beta, std::uint64_t seed) -> ToyDataset {
  const auto scenario = toy_scenario(kind, mu_beta);
  const auto pool = GenotypePool::synthetic();
  const auto g = sample_genotypes(pool, scenario.n, scenario.n_variants, derive_seed(seed, 1));
  const auto beta = draw_effects(g, scenario, derive_seed(seed, 2));
  const auto ph = simulate_phenotype(g, beta, scenario, derive_seed(seed, 3));

  ToyDataset d{toy_id(kind), g, {ph.y, g.sample_ids()}, std::nullopt, mu_beta};
  if (ph.covariates) {
    d.covariates = CovariateTable{ph.covariates->design().rightCols(2), {"x1", "x2"},
                                  g.sample_ids()};
  }
  return d;
}

auto covariates_of(const ToyDataset& data) -> std::optional<CovariateMatrix> {
  if (!data.covariates) return std::nullopt;
  return align_covariates(*data.covariates, data.g.sample_ids());
}

auto oracle_p(const ToyDataset& data, std::uint64_t seed, std::size_t permutations) -> double {
  const AssocOptions o = toy_options(seed, permutations);
  return *analyse_toy(data, o).result.p_permutation;
}

}  // namespace

auto analyse_toy(const ToyDataset& data, const AssocOptions& options) -> AssocOutcome {
  const auto y = align_phenotypes(data.y, data.g.sample_ids());
  return run_association(data.g, y, covariates_of(data), options);
}

auto generate_toy_dataset(ToyKind kind, std::uint64_t seed) -> ToyDataset {
  if (kind == ToyKind::NullGaussian) return build_dataset(kind, 0.0, seed);
  if (kind == ToyKind::BinaryCovariates) return build_dataset(kind, 1.0, seed);

  const double target = kind == ToyKind::PlantedGaussian ? 0.001 : 0.01;
  double mu_beta = 0.5;
  for (int step = 0; step < 12; ++step, mu_beta *= 1.5) {
    auto d = build_dataset(kind, mu_beta, seed);
    if (oracle_p(d, seed, kOraclePermutations) < target) return d;
  }
  throw NumericalError("planted effect did not reach the oracle threshold for " + toy_id(kind));
}

auto oracle_records(const ToyDataset& data, std::uint64_t seed) -> std::vector<OracleRecord> {
  std::vector<OracleRecord> out;
  auto add = [&](const ToyDataset& d, const std::string& method) {
    const auto o = analyse_toy(d, toy_options(seed, kOraclePermutations));
    out.push_back({data.id, method, o.result.statistic, o.result.p_asymptotic,
                   *o.result.p_permutation, kOraclePermutations, seed});
  };
  add(data, "wu");
  if (data.covariates) {
    ToyDataset bare = data;
    bare.covariates.reset();
    add(bare, "wu-unadjusted");
  }
  return out;
}

auto calibrate_null(std::uint64_t seed, std::size_t seeds, std::size_t permutations)
    -> NullCalibration {
  NullCalibration cal{seeds, 0, permutations};
  for (std::size_t k = 0; k < seeds; ++k) {
    const auto s = derive_seed(seed, 1000 + k);
    const auto d = build_dataset(ToyKind::NullGaussian, 0.0, s);
    if (oracle_p(d, s, permutations) > 0.05) ++cal.above_level;
  }
  return cal;
}

auto generate_toy_suite(std::uint64_t seed) -> ToySuite {
  ToySuite suite;
  const auto kinds = all_toy_kinds();
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const auto s = derive_seed(seed, k);
    suite.datasets.push_back(generate_toy_dataset(kinds[k], s));
    for (auto& r : oracle_records(suite.datasets.back(), s)) suite.records.push_back(r);
  }
  suite.calibration = calibrate_null(seed, 100, 1000);
  return suite;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

void write_toy_suite(const ToySuite& suite, std::uint64_t seed, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json datasets = nlohmann::ordered_json::array();
  for (const auto& d : suite.datasets) {
    std::ostringstream g, y;
    write_genotypes(g, d.g);
    write_phenotypes(y, d.y);
    write_file(dir / (d.id + ".genotypes.tsv"), g.str());
    write_file(dir / (d.id + ".phenotypes.tsv"), y.str());
    nlohmann::ordered_json entry = {{"id", d.id}, {"mu_beta", d.mu_beta}, {"covariates", false}};
    if (d.covariates) {
      std::ostringstream x;
      write_covariates(x, *d.covariates);
      write_file(dir / (d.id + ".covariates.tsv"), x.str());
      entry["covariates"] = true;
    }
    datasets.push_back(std::move(entry));
  }
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : suite.records) records.push_back(to_json(r));
  const nlohmann::ordered_json doc = {
      {"seed", seed},
      {"datasets", std::move(datasets)},
      {"oracles", std::move(records)},
      {"null_calibration",
       {{"seeds", suite.calibration.seeds},
        {"above_level", suite.calibration.above_level},
        {"permutations", suite.calibration.permutations}}},
  };
  write_file(dir / "oracles.json", doc.dump(2) + "\n");
}

auto load_toy_suite(const std::filesystem::path& dir) -> LoadedToySuite {
  std::ifstream in(dir / "oracles.json");
  if (!in) throw InputError("cannot open '" + (dir / "oracles.json").string() + "'");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed oracles.json: ") + e.what());
  }
  LoadedToySuite out;
  out.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& e : doc.at("datasets")) {
    const auto id = e.at("id").get<std::string>();
    auto g = load_genotypes(dir / (id + ".genotypes.tsv"));
    auto y = load_phenotypes(dir / (id + ".phenotypes.tsv"));
    std::optional<CovariateTable> x;
    if (e.at("covariates").get<bool>()) x = load_covariates(dir / (id + ".covariates.tsv"));
    out.datasets.push_back({id, std::move(g), std::move(y), std::move(x),
                            e.at("mu_beta").get<double>()});
  }
  for (const auto& r : doc.at("oracles")) out.records.push_back(oracle_from_json(r));
  const auto& cal = doc.at("null_calibration");
  out.calibration = {cal.at("seeds").get<std::size_t>(), cal.at("above_level").get<std::size_t>(),
                     cal.at("permutations").get<std::size_t>()};
  return out;
}

}  // namespace wuseq
