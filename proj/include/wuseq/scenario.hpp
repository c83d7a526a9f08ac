#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wuseq/baseline.hpp"
#include "wuseq/genotype.hpp"
#include "wuseq/phenotype.hpp"
#include "wuseq/ustat.hpp"

namespace wuseq {

enum class PhenotypeFamily { BinaryLogistic, Gaussian, StudentT2, Cauchy };
enum class EffectMode { Null, MixedDirection, DeleteriousMajority };

auto to_string(PhenotypeFamily f) -> std::string_view;
auto to_string(EffectMode m) -> std::string_view;
auto parse_family(std::string_view text) -> PhenotypeFamily;
auto parse_effect_mode(std::string_view text) -> EffectMode;

// One method evaluated on every replicate of a study.
struct MethodConfig {
  enum class Kind { Wu, Baseline };

  Kind kind = Kind::Wu;
  Transform transform = Transform::Quantile;
  NormKind norm = NormKind::L2;
  BaselineKind baseline = BaselineKind::Score;
  bool adjust = true;  // use simulated covariates when the scenario has them

  // Grammar: wu[-rank][-l1][-unadjusted] | baseline[-offdiag][-unadjusted]
  static auto parse(std::string_view text) -> MethodConfig;
  auto label() const -> std::string;
};

// Simulation settings. Effect-size defaults are calibrated for desk-scale
// studies, not copied from any table.
struct Scenario {
  std::string name = "scenario";
  PhenotypeFamily family = PhenotypeFamily::Gaussian;
  EffectMode effect_mode = EffectMode::Null;
  double pct_functional = 0.5;  // fraction of MAF < threshold variants that are causal
  Index n = 500;
  Index n_variants = 194;  // variants generated per replicate, before filtering
  double mu_beta = 0.3;    // mean effect in the deleterious-majority mode
  double sigma_beta = 0.45;
  double mu = 0.0;
  double sigma = 1.0;         // Gaussian and Student-t noise scale
  double cauchy_scale = 1.0;  // b
  bool with_covariates = false;
  double alpha1 = 0.5;  // effect of x1 ~ Bernoulli(0.3)
  double alpha2 = 0.5;  // effect of x2 ~ N(0, 1)
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  double level = 0.05;  // significance level for rejection rates
  double maf_threshold = 0.03;
  std::string pool;  // optional genotype pool file; synthetic spectrum if empty
  std::vector<MethodConfig> methods = {MethodConfig{}};

  // Throws InputError when a field is out of range.
  void validate() const;
};

// Flat `key = value` lines; '#' starts a comment. Unknown keys and bad
// values raise InputError naming the key.
auto read_scenario(std::istream& in) -> Scenario;
auto load_scenario(const std::filesystem::path& path) -> Scenario;
void apply_scenario_key(Scenario& s, const std::string& key, const std::string& value);

}  // namespace wuseq
