#include "wuseq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wuseq/baseline.hpp"
#include "wuseq/error.hpp"
#include "wuseq/io.hpp"
#include "wuseq/pipeline.hpp"
#include "wuseq/random.hpp"

namespace wuseq {

auto default_spectrum() -> std::vector<SpectrumBin> {
  return {{4.5e-4, 1e-3, 0.348}, {1e-3, 1e-2, 0.343}, {1e-2, 3e-2, 0.109}, {3e-2, 0.5, 0.200}};
}

auto GenotypePool::synthetic(std::vector<SpectrumBin> spectrum) -> GenotypePool {
  if (spectrum.empty()) throw InputError("spectrum needs at least one bin");
  for (const auto& b : spectrum) {
    if (!(b.lo > 0.0 && b.lo < b.hi && b.hi <= 0.5 && b.mass >= 0.0)) {
      throw InputError("invalid spectrum bin");
    }
  }
  GenotypePool pool;
  pool.spectrum_ = std::move(spectrum);
  return pool;
}

auto GenotypePool::from_panel(GenotypeMatrix panel) -> GenotypePool {
  if (panel.has_missing()) throw InputError("genotype pool must be complete");
  GenotypePool pool;
  pool.panel_ = std::move(panel);
  return pool;
}

auto GenotypePool::from_file(const std::filesystem::path& path) -> GenotypePool {
  return from_panel(load_genotypes(path));
}

auto draw_spectrum(std::span<const SpectrumBin> spectrum, Index n_variants, std::uint64_t seed)
    -> Eigen::VectorXd {
  std::vector<double> masses;
  for (const auto& b : spectrum) masses.push_back(b.mass);
  auto rng = make_rng(seed);
  std::discrete_distribution<std::size_t> pick(masses.begin(), masses.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd maf(n_variants);
  for (Index p = 0; p < n_variants; ++p) {
    const auto& b = spectrum[pick(rng)];
    maf(p) = std::exp(std::log(b.lo) + unit(rng) * (std::log(b.hi) - std::log(b.lo)));
  }
  return maf;
}

auto sample_genotypes(const GenotypePool& pool, Index n, Index n_variants, std::uint64_t seed)
    -> GenotypeMatrix {
  if (n_variants < 1) throw InputError("at least one variant must be requested");
  if (n < 2) throw InputError("at least two samples must be requested");
  GenotypeMatrix::Values values(n, n_variants);

  if (pool.is_synthetic()) {
    const Eigen::VectorXd maf = draw_spectrum(pool.spectrum(), n_variants, derive_seed(seed, 0));
    auto rng = make_rng(derive_seed(seed, 1));
    for (Index p = 0; p < n_variants; ++p) {
      std::binomial_distribution<int> draw(2, maf(p));
      for (Index i = 0; i < n; ++i) values(i, p) = static_cast<std::uint8_t>(draw(rng));
    }
    return GenotypeMatrix(std::move(values));
  }

  const auto& panel = pool.panel();
  if (n > panel.n_samples() || n_variants > panel.n_variants()) {
    throw InputError("genotype pool smaller than requested sample");
  }
  auto rng = make_rng(seed);
  std::vector<Index> rows(static_cast<std::size_t>(panel.n_samples()));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(static_cast<std::size_t>(n));
  std::uniform_int_distribution<Index> start_dist(0, panel.n_variants() - n_variants);
  const Index start = start_dist(rng);
  for (Index i = 0; i < n; ++i) {
    for (Index p = 0; p < n_variants; ++p) {
      values(i, p) = panel.values()(rows[static_cast<std::size_t>(i)], start + p);
    }
  }
  return GenotypeMatrix(std::move(values));
}

auto draw_effects(const GenotypeMatrix& g, const Scenario& scenario, std::uint64_t seed)
    -> Eigen::VectorXd {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(g.n_variants());
  if (scenario.effect_mode == EffectMode::Null || scenario.pct_functional == 0.0) return beta;

  const auto maf = compute_maf(g);
  std::vector<Index> candidates;
  for (Index p = 0; p < g.n_variants(); ++p) {
    if (maf.minor(p) < scenario.maf_threshold) candidates.push_back(p);
  }
  if (candidates.empty()) throw InputError("no rare variants available for functional effects");

  auto rng = make_rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const auto count = static_cast<std::size_t>(
      std::lround(scenario.pct_functional * static_cast<double>(candidates.size())));
  const double mean = scenario.effect_mode == EffectMode::MixedDirection ? 0.0 : scenario.mu_beta;
  std::normal_distribution<double> effect(mean, scenario.sigma_beta);
  for (std::size_t k = 0; k < count; ++k) beta(candidates[k]) = effect(rng);
  return beta;
}

auto simulate_phenotype(const GenotypeMatrix& g, const Eigen::VectorXd& beta,
                        const Scenario& scenario, std::uint64_t seed) -> SimulatedPhenotype {
  if (beta.size() != g.n_variants()) throw InputError("effect vector does not match variants");
  const Index n = g.n_samples();
  auto rng = make_rng(seed);

  Eigen::VectorXd lp = Eigen::VectorXd::Constant(n, scenario.mu) + g.dosages() * beta;
  SimulatedPhenotype out;
  if (scenario.with_covariates) {
    std::bernoulli_distribution x1(0.3);
    std::normal_distribution<double> x2;
    Eigen::MatrixXd raw(n, 2);
    for (Index i = 0; i < n; ++i) {
      raw(i, 0) = x1(rng) ? 1.0 : 0.0;
      raw(i, 1) = x2(rng);
    }
    lp += scenario.alpha1 * raw.col(0) + scenario.alpha2 * raw.col(1);
    out.covariates = CovariateMatrix(raw, {"x1", "x2"});
  }

  out.y.resize(n);
  switch (scenario.family) {
    case PhenotypeFamily::BinaryLogistic: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (Index i = 0; i < n; ++i) {
        const double prob = 1.0 / (1.0 + std::exp(-lp(i)));
        out.y(i) = unit(rng) < prob ? 1.0 : 0.0;
      }
      break;
    }
    case PhenotypeFamily::Gaussian: {
      std::normal_distribution<double> noise(0.0, scenario.sigma);
      for (Index i = 0; i < n; ++i) out.y(i) = lp(i) + noise(rng);
      break;
    }
    case PhenotypeFamily::StudentT2: {
      std::student_t_distribution<double> noise(2.0);
      for (Index i = 0; i < n; ++i) out.y(i) = lp(i) + scenario.sigma * noise(rng);
      break;
    }
    case PhenotypeFamily::Cauchy: {
      std::cauchy_distribution<double> noise(0.0, scenario.cauchy_scale);
      for (Index i = 0; i < n; ++i) out.y(i) = lp(i) + noise(rng);
      break;
    }
  }
  return out;
}

auto make_pool(const Scenario& scenario) -> GenotypePool {
  return scenario.pool.empty() ? GenotypePool::synthetic() : GenotypePool::from_file(scenario.pool);
}

namespace {

auto evaluate_method(const MethodConfig& m, const SimilarityMatrix& w,
                     const SimulatedPhenotype& ph) -> double {
  const bool use_x = m.adjust && ph.covariates.has_value();
  if (m.kind == MethodConfig::Kind::Baseline) {
    const auto x = use_x ? *ph.covariates : CovariateMatrix::intercept_only(ph.y.size());
    return baseline_test(w, ph.y, x, m.baseline, m.norm).p_asymptotic;
  }
  const std::optional<CovariateMatrix> x = use_x ? ph.covariates : std::nullopt;
  return wu_test(w, ph.y, x, m.transform, m.norm).result.p_asymptotic;
}

}  // namespace

auto run_study(const Scenario& scenario, const GenotypePool& pool) -> StudyReport {
  scenario.validate();
  const auto n_methods = scenario.methods.size();
  const auto reps = scenario.replicates;
  constexpr double kFailed = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> pvalues(n_methods, std::vector<double>(reps, kFailed));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t r = 0; r < reps; ++r) {
    const auto rep_seed = derive_seed(scenario.seed, r);
    std::optional<SimilarityMatrix> w;
    std::optional<SimulatedPhenotype> ph;
    try {
      const auto g = sample_genotypes(pool, scenario.n, scenario.n_variants, derive_seed(rep_seed, 1));
      const auto prepared = prepare_genotypes(g, scenario.maf_threshold, derive_seed(rep_seed, 4));
      const auto beta = draw_effects(prepared.g, scenario, derive_seed(rep_seed, 2));
      ph = simulate_phenotype(prepared.g, beta, scenario, derive_seed(rep_seed, 3));
      w = weighted_ibs(prepared.g, prepared.maf);
    } catch (const std::exception&) {
      continue;
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      try {
        pvalues[m][r] = evaluate_method(scenario.methods[m], *w, *ph);
      } catch (const std::exception&) {
        // recorded as NaN
      }
    }
  }

  StudyReport report{scenario, {}, std::move(pvalues)};
  for (std::size_t m = 0; m < n_methods; ++m) {
    MethodSummary s;
    s.method = scenario.methods[m].label();
    s.replicates = reps;
    for (double p : report.pvalues[m]) {
      if (std::isnan(p)) {
        ++s.failures;
      } else {
        ++s.evaluated;
        if (p < scenario.level) ++s.rejections;
      }
    }
    if (s.evaluated > 0) {
      const double denom = static_cast<double>(s.evaluated);
      s.rejection_rate = static_cast<double>(s.rejections) / denom;
      s.se = std::sqrt(s.rejection_rate * (1.0 - s.rejection_rate) / denom);
    }
    report.methods.push_back(std::move(s));
  }
  return report;
}

}  // namespace wuseq
