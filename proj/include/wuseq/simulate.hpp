#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wuseq/genotype.hpp"
#include "wuseq/scenario.hpp"

namespace wuseq {

// Piece of the minor-allele-frequency spectrum: `mass` of all variants are
// drawn log-uniformly from [lo, hi).
struct SpectrumBin {
  double lo;
  double hi;
  double mass;
};

// Rare-skewed default: 34.8% below 0.001, 69.1% below 0.01, 80% below 0.03,
// support [4.5e-4, 0.5).
auto default_spectrum() -> std::vector<SpectrumBin>;

// Where replicate genotypes come from: independent variants drawn from a
// synthetic spectrum, or rows and a contiguous variant segment of a panel.
class GenotypePool {
 public:
  static auto synthetic(std::vector<SpectrumBin> spectrum = default_spectrum()) -> GenotypePool;
  static auto from_panel(GenotypeMatrix panel) -> GenotypePool;
  static auto from_file(const std::filesystem::path& path) -> GenotypePool;

  auto is_synthetic() const -> bool { return !panel_.has_value(); }
  auto spectrum() const -> const std::vector<SpectrumBin>& { return spectrum_; }
  auto panel() const -> const GenotypeMatrix& { return *panel_; }

 private:
  std::vector<SpectrumBin> spectrum_;
  std::optional<GenotypeMatrix> panel_;
};

auto draw_spectrum(std::span<const SpectrumBin> spectrum, Index n_variants, std::uint64_t seed)
    -> Eigen::VectorXd;

auto sample_genotypes(const GenotypePool& pool, Index n, Index n_variants, std::uint64_t seed)
    -> GenotypeMatrix;

// Effect vector: zero off the functional set, N(mu_beta, sigma_beta^2) on a
// uniform subset of round(pct_functional * #{maf < threshold}) variants.
auto draw_effects(const GenotypeMatrix& g, const Scenario& scenario, std::uint64_t seed)
    -> Eigen::VectorXd;

struct SimulatedPhenotype {
  Eigen::VectorXd y;
  std::optional<CovariateMatrix> covariates;
};

auto simulate_phenotype(const GenotypeMatrix& g, const Eigen::VectorXd& beta,
                        const Scenario& scenario, std::uint64_t seed) -> SimulatedPhenotype;

struct MethodSummary {
  std::string method;
  std::size_t replicates = 0;  // requested
  std::size_t evaluated = 0;   // replicates - failures; the rate denominator
  std::size_t rejections = 0;
  std::size_t failures = 0;
  double rejection_rate = 0.0;
  double se = 0.0;
};

struct StudyReport {
  Scenario scenario;
  std::vector<MethodSummary> methods;
  // p-values per method and replicate; NaN marks a failed replicate.
  std::vector<std::vector<double>> pvalues;
};

// Per replicate: genotypes -> MAF filter -> effects -> phenotype -> every
// method on the same data. Replicate r uses seeds derived from
// (scenario.seed, r), so results do not depend on scheduling.
auto run_study(const Scenario& scenario, const GenotypePool& pool) -> StudyReport;

auto make_pool(const Scenario& scenario) -> GenotypePool;

}  // namespace wuseq
