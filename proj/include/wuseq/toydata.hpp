#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wuseq/genotype.hpp"
#include "wuseq/io.hpp"
#include "wuseq/pipeline.hpp"

namespace wuseq {

inline constexpr std::size_t kOraclePermutations = 100000;
inline constexpr Index kToySamples = 200;
inline constexpr Index kToyVariants = 60;

enum class ToyKind { NullGaussian, PlantedGaussian, PlantedCauchy, BinaryCovariates };

auto toy_id(ToyKind kind) -> std::string;  // "null-gaussian", ...
auto all_toy_kinds() -> std::vector<ToyKind>;

struct ToyDataset {
  std::string id;
  GenotypeMatrix g;
  PhenotypeVector y;
  std::optional<CovariateTable> covariates;
  double mu_beta = 0.0;  // planted mean effect; 0 for the null set
};

// Oracle value for one dataset and method: permutation p at B = 100000 next
// to the asymptotic p of the same run.
struct OracleRecord {
  std::string dataset;
  std::string method;  // MethodConfig label
  double statistic = 0.0;
  double p_asymptotic = 1.0;
  double p_permutation = 1.0;
  std::size_t permutations = kOraclePermutations;
  std::uint64_t seed = 0;  // generator seed of the dataset
};

auto to_json(const OracleRecord& r) -> nlohmann::ordered_json;
auto oracle_from_json(const nlohmann::ordered_json& j) -> OracleRecord;

// Planted sets grow the mean effect by 1.5x from 0.5 until the oracle p drops
// below 0.001 (Gaussian) or 0.01 (Cauchy).
auto generate_toy_dataset(ToyKind kind, std::uint64_t seed) -> ToyDataset;

// Pipeline options used for every oracle on the suite.
auto toy_options(std::uint64_t seed, std::size_t permutations) -> AssocOptions;

auto analyse_toy(const ToyDataset& data, const AssocOptions& options)
    -> AssocOutcome;
auto oracle_records(const ToyDataset& data, std::uint64_t seed) -> std::vector<OracleRecord>;

struct NullCalibration {
  std::size_t seeds = 0;
  std::size_t above_level = 0;  // runs with oracle p > 0.05
  std::size_t permutations = 0;
};

// Null datasets regenerated from `seeds` derived seeds; the permutation p is
// computed with `permutations` shuffles each.
auto calibrate_null(std::uint64_t seed, std::size_t seeds, std::size_t permutations)
    -> NullCalibration;

struct ToySuite {
  std::vector<ToyDataset> datasets;
  std::vector<OracleRecord> records;
  NullCalibration calibration;
};

auto generate_toy_suite(std::uint64_t seed) -> ToySuite;

// <dir>/<id>.genotypes.tsv, .phenotypes.tsv, .covariates.tsv and oracles.json.
void write_toy_suite(const ToySuite& suite, std::uint64_t seed, const std::filesystem::path& dir);

struct LoadedToySuite {
  std::vector<ToyDataset> datasets;
  std::vector<OracleRecord> records;
  NullCalibration calibration;
  std::uint64_t seed = 0;
};

auto load_toy_suite(const std::filesystem::path& dir) -> LoadedToySuite;

}  // namespace wuseq
