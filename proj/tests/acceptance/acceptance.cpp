// Acceptance suite: one PASS/FAIL line per criterion.
//
//   wuseq_acceptance            run every criterion
//   wuseq_acceptance --only N   run criterion N
//
// Exit status is non-zero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "support.hpp"
#include "wuseq/covadjust.hpp"
#include "wuseq/nulldist.hpp"
#include "wuseq/phenotype.hpp"
#include "wuseq/pipeline.hpp"
#include "wuseq/simulate.hpp"
#include "wuseq/toydata.hpp"
#include "wuseq/ustat.hpp"

using namespace wuseq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

class Stopwatch {
 public:
  auto seconds() const -> double {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

auto fmt(double v, int digits = 4) -> std::string {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

auto in_envelope(double rate) -> bool { return rate >= 0.030 && rate <= 0.070; }

// Random (W, Q) corpus shared by criteria 1 and 2: 200 pairs, n in [3, 50].
struct CorpusItem {
  SimilarityMatrix w;
  QuantileVector q;
};

auto corpus() -> std::vector<CorpusItem> {
  auto rng = make_rng(20240101);
  std::uniform_int_distribution<Index> size(3, 50);
  std::vector<CorpusItem> out;
  for (int k = 0; k < 200; ++k) {
    const Index n = size(rng);
    auto w = testing::random_similarity(n, rng);
    out.push_back({std::move(w), {testing::random_vector(n, rng), Transform::Quantile}});
  }
  return out;
}

auto criterion_1() -> Outcome {
  const Stopwatch clock;
  const auto items = corpus();
  double worst = 0.0;
  for (const auto& it : items) {
    const auto k = build_weight_matrix(it.w, NormKind::L2);
    const double n = static_cast<double>(k.n());
    const double oracle = testing::pairwise_sum(k.k, it.q.q) / (n * (n - 1.0));
    worst = std::max(worst, testing::relative_error(wu_statistic(k, it.q), oracle));
  }
  const double t = clock.seconds();
  return {worst < 1e-10 && t < 5.0,
          "max relative error " + fmt(worst) + " over 200 pairs, " + fmt(t, 3) + " s"};
}

auto criterion_2() -> Outcome {
  const auto items = corpus();
  double worst = 0.0;
  for (const auto& it : items) {
    for (auto norm : {NormKind::L2, NormKind::L1}) {
      const auto k = build_weight_matrix(it.w, norm);
      const auto u = u_components(it.w, it.q);
      worst = std::max(worst, testing::relative_error(u.statistic(k.c.value), wu_statistic(k, it.q)));
    }
  }
  return {worst < 1e-10, "max relative error " + fmt(worst) + " (L1 and L2 constants)"};
}

auto criterion_3() -> Outcome {
  const Stopwatch clock;
  auto spec_of = [](std::vector<double> l) {
    MixtureSpec s;
    s.lambdas = std::move(l);
    return s;
  };
  const double p1 = mixture_tail_probability(spec_of({1.0}), 3.841).p;
  const double p2 = mixture_tail_probability(spec_of({0.5, 0.5}), 1.0).p;
  const double p3 = mixture_tail_probability(spec_of({1.0, -1.0}), 0.0).p;
  bool ok = std::fabs(p1 - 0.05) <= 5e-4 && std::fabs(p2 - std::exp(-1.0)) <= 5e-4 &&
            std::fabs(p3 - 0.5) <= 5e-4;

  auto rng = make_rng(33);
  std::uniform_int_distribution<int> size(2, 8);
  std::normal_distribution<double> z;
  int agree = 0;
  double worst_z = 0.0;
  for (int s = 0; s < 20; ++s) {
    std::vector<double> l(static_cast<std::size_t>(size(rng)));
    for (auto& v : l) v = z(rng);
    l[0] = std::fabs(l[0]);
    l[1] = -std::fabs(l[1]);
    const auto spec = spec_of(l);
    const double t = spec.sum() + std::sqrt(spec.variance());
    const double p = mixture_tail_probability(spec, t).p;
    const std::vector<double> grid{t};
    const auto mc = mixture_tail_monte_carlo(spec, grid, 10000000, derive_seed(34, s));
    const double dz = std::fabs(p - mc[0].p) / mc[0].standard_error;
    worst_z = std::max(worst_z, dz);
    if (dz <= 3.0) ++agree;
  }
  const double secs = clock.seconds();
  ok = ok && agree == 20 && secs < 120.0;
  return {ok, "closed forms " + fmt(p1, 6) + ", " + fmt(p2, 6) + ", " + fmt(p3, 6) +
                  "; Monte-Carlo agreement " + std::to_string(agree) + "/20 (max |dp|/SE " +
                  fmt(worst_z, 3) + "), " + fmt(secs, 3) + " s"};
}

auto criterion_4() -> Outcome {
  double worst_mean = 0.0, worst_var = 0.0;
  int count = 0;
  for (Index n : {50, 100, 200, 500}) {
    for (std::uint64_t r = 0; r < 4; ++r) {
      const auto seed = derive_seed(static_cast<std::uint64_t>(n), r);
      const auto g = sample_genotypes(GenotypePool::synthetic(), n, 194, seed);
      const auto prepared = prepare_genotypes(g, 0.03, derive_seed(seed, 1));
      const auto w = weighted_ibs(prepared.g, prepared.maf);
      for (auto norm : {NormKind::L2, NormKind::L1}) {
        const auto k = build_weight_matrix(w, norm);
        const auto spec = scaled_eigenvalues(k);
        double largest = 0.0;
        for (double l : spec.lambdas) largest = std::max(largest, std::fabs(l));
        worst_mean = std::max(worst_mean, std::fabs(spec.sum()) / largest);
        const double nm1 = static_cast<double>(n - 1);
        const double expect = 2.0 * k.k.squaredNorm() / (nm1 * nm1);
        worst_var = std::max(worst_var, testing::relative_error(spec.variance(), expect));
        ++count;
      }
    }
  }
  return {worst_mean <= 1e-8 && worst_var <= 1e-8,
          std::to_string(count) + " matrices; max |sum|/max|lambda| " + fmt(worst_mean) +
              ", max variance-identity relative error " + fmt(worst_var)};
}

auto criterion_5() -> Outcome {
  double total = 0.0;
  constexpr int kDatasets = 50;
  for (int d = 0; d < kDatasets; ++d) {
    const auto seed = derive_seed(55, d);
    const auto g = sample_genotypes(GenotypePool::synthetic(), 200, 200, derive_seed(seed, 1));
    const auto prepared = prepare_genotypes(g, 0.03, derive_seed(seed, 2));
    const auto w = weighted_ibs(prepared.g, prepared.maf);
    auto rng = make_rng(derive_seed(seed, 3));
    const auto y = testing::random_vector(200, rng);
    const auto out =
        wu_test(w, y, std::nullopt, Transform::Quantile, NormKind::L2, 20000, derive_seed(seed, 4));
    total += std::fabs(out.result.p_asymptotic - *out.result.p_permutation);
  }
  const double mean = total / kDatasets;
  return {mean < 0.02, "mean |p_asym - p_perm| = " + fmt(mean) + " over 50 datasets"};
}

auto null_scenario(PhenotypeFamily family, Index n, bool covariates) -> Scenario {
  Scenario s;
  s.name = "null";
  s.family = family;
  s.effect_mode = EffectMode::Null;
  s.n = n;
  s.with_covariates = covariates;
  s.replicates = 1000;
  s.seed = 606;
  return s;
}

auto criterion_6() -> Outcome {
  bool ok = true;
  std::string detail;
  const auto pool = GenotypePool::synthetic();
  for (auto family : {PhenotypeFamily::Gaussian, PhenotypeFamily::BinaryLogistic,
                      PhenotypeFamily::StudentT2, PhenotypeFamily::Cauchy}) {
    for (bool cov : {false, true}) {
      const auto report = run_study(null_scenario(family, 200, cov), pool);
      const auto& m = report.methods[0];
      const bool cell = in_envelope(m.rejection_rate) && m.failures == 0;
      ok = ok && cell;
      detail += std::string(to_string(family)) + (cov ? "+cov " : " ") + fmt(m.rejection_rate, 3) +
                (cell ? "" : " (out)") + "; ";
    }
  }
  return {ok, detail + "envelope [0.030, 0.070]"};
}

auto criterion_7() -> Outcome {
  auto s = null_scenario(PhenotypeFamily::Cauchy, 500, false);
  s.seed = 707;
  s.methods = {MethodConfig{}, MethodConfig::parse("baseline")};
  const auto report = run_study(s, GenotypePool::synthetic());
  const double wu = report.methods[0].rejection_rate;
  const double base = report.methods[1].rejection_rate;
  return {base > 0.10 && in_envelope(wu),
          "Cauchy null n=500: WU " + fmt(wu, 3) + ", baseline " + fmt(base, 3)};
}

auto a1_scenario(PhenotypeFamily family, Index n) -> Scenario {
  Scenario s;
  s.name = "a1";
  s.family = family;
  s.effect_mode = EffectMode::MixedDirection;
  s.pct_functional = 0.5;
  s.n = n;
  s.replicates = 1000;
  s.seed = 808;
  return s;
}

auto criterion_8() -> Outcome {
  const auto pool = GenotypePool::synthetic();
  std::vector<MethodSummary> trend;
  std::string detail = "Gaussian A1 power";
  for (Index n : {50, 100, 200, 500}) {
    trend.push_back(run_study(a1_scenario(PhenotypeFamily::Gaussian, n), pool).methods[0]);
    detail += " " + fmt(trend.back().rejection_rate, 3);
  }
  bool increasing = true;
  for (std::size_t k = 0; k + 1 < trend.size(); ++k) {
    const double gap = trend[k + 1].rejection_rate - trend[k].rejection_rate;
    const double se = std::hypot(trend[k].se, trend[k + 1].se);
    increasing = increasing && gap > 2.0 * se;
  }

  auto c = a1_scenario(PhenotypeFamily::Cauchy, 500);
  c.sigma_beta = 0.7;
  c.methods = {MethodConfig{}, MethodConfig::parse("baseline")};
  const auto cauchy = run_study(c, pool);
  const double wu = cauchy.methods[0].rejection_rate;
  const double base = cauchy.methods[1].rejection_rate;
  detail += (increasing ? " (increasing)" : " (not increasing)");
  detail += "; Cauchy A1 n=500 WU " + fmt(wu, 3) + " vs baseline " + fmt(base, 3);
  return {increasing && wu - base > 0.2, detail};
}

auto criterion_9() -> Outcome {
  const auto pool = GenotypePool::synthetic();
  auto null = null_scenario(PhenotypeFamily::Gaussian, 100, false);
  null.n_variants = 2000;
  null.seed = 909;
  auto alt = a1_scenario(PhenotypeFamily::Gaussian, 100);
  alt.n_variants = 2000;
  alt.seed = 910;
  const double r0 = run_study(null, pool).methods[0].rejection_rate;
  const double r1 = run_study(alt, pool).methods[0].rejection_rate;
  return {in_envelope(r0) && r1 - r0 > 0.2,
          "n=100, 2000 variants: null " + fmt(r0, 3) + ", power " + fmt(r1, 3)};
}

auto criterion_10() -> Outcome {
  const auto suite = load_toy_suite(WUSEQ_TOY_DIR);
  using Map = std::function<double(double, double)>;
  const std::vector<std::pair<std::string, Map>> maps = {
      {"exp", [](double y, double s) { return std::exp(y / s); }},
      {"affine", [](double y, double) { return 2.5 * y + 7.0; }},
      {"cubic", [](double y, double) { return y * y * y; }},
  };
  int checked = 0, identical = 0;
  for (const auto& rec : suite.records) {
    const auto it = std::find_if(suite.datasets.begin(), suite.datasets.end(),
                                 [&](const ToyDataset& d) { return d.id == rec.dataset; });
    if (it == suite.datasets.end()) return {false, "no dataset for record " + rec.dataset};
    ToyDataset data = *it;
    if (rec.method == "wu-unadjusted") data.covariates.reset();
    const double scale = std::max(1.0, data.y.y.cwiseAbs().maxCoeff() / 300.0);
    for (const auto& [name, f] : maps) {
      ToyDataset mapped = data;
      for (Index i = 0; i < mapped.y.y.size(); ++i) mapped.y.y(i) = f(data.y.y(i), scale);
      const auto out = analyse_toy(mapped, toy_options(rec.seed, rec.permutations));
      ++checked;
      if (out.result.p_asymptotic == rec.p_asymptotic &&
          *out.result.p_permutation == rec.p_permutation && out.result.statistic == rec.statistic) {
        ++identical;
      }
    }
  }
  return {checked > 0 && identical == checked,
          std::to_string(identical) + "/" + std::to_string(checked) +
              " transformed runs bit-identical to the oracle records"};
}

auto criterion_11() -> Outcome {
  auto rng = make_rng(1111);
  std::uniform_int_distribution<Index> size(20, 200);
  std::uniform_int_distribution<Index> cols(1, 5);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.5, 3.0);
  double worst_h = 0.0, worst_hx = 0.0, worst_qx = 0.0, worst_p = 0.0;
  for (int d = 0; d < 100; ++d) {
    const Index n = size(rng);
    const Index j = cols(rng);
    Eigen::MatrixXd raw(n, j);
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < j; ++c) raw(i, c) = c == 0 ? (z(rng) > 0.5 ? 1.0 : 0.0) : z(rng);
    }
    const CovariateMatrix x(raw);
    const auto q = quantile_transform(testing::random_vector(n, rng));
    const auto projected = project_residuals(q, x);
    const auto& h = projected.context.h;
    worst_h = std::max(worst_h, (h * h - h).cwiseAbs().maxCoeff());
    worst_hx = std::max(worst_hx, (h * x.design()).cwiseAbs().maxCoeff());
    worst_qx = std::max(worst_qx, (projected.residuals.transpose() * x.design()).cwiseAbs().maxCoeff());

    if (d % 4 == 0) {
      const auto g = sample_genotypes(GenotypePool::synthetic(), n, 150, derive_seed(1112, d));
      const auto prepared = prepare_genotypes(g, 0.03, 1);
      const auto k = build_weight_matrix(weighted_ibs(prepared.g, prepared.maf), NormKind::L2);
      Eigen::MatrixXd recoded = raw;
      for (Index c = 0; c < j; ++c) {
        recoded.col(c) = (z(rng) > 0 ? 1.0 : -1.0) * u(rng) * raw.col(c).array() + z(rng);
      }
      const double a = adjusted_test(k, q, x).p_asymptotic;
      const double b = adjusted_test(k, q, CovariateMatrix(recoded)).p_asymptotic;
      worst_p = std::max(worst_p, std::fabs(a - b));
    }
  }
  const bool ok = worst_h < 1e-9 && worst_hx < 1e-9 && worst_qx < 1e-9 && worst_p < 1e-9;
  return {ok, "max |H^2-H| " + fmt(worst_h, 3) + ", |HX| " + fmt(worst_hx, 3) + ", |Qe'X| " +
                  fmt(worst_qx, 3) + ", affine-recoding |dp| " + fmt(worst_p, 3)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-11)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "quadratic-form equivalence", criterion_1},
      {2, "decomposition identity", criterion_2},
      {3, "mixture engine vs closed forms and Monte-Carlo", criterion_3},
      {4, "zero-mean and variance identities", criterion_4},
      {5, "asymptotic vs permutation agreement", criterion_5},
      {6, "type-I control", criterion_6},
      {7, "robustness contrast under a Cauchy null", criterion_7},
      {8, "power trends", criterion_8},
      {9, "high-dimension regime", criterion_9},
      {10, "monotone invariance on the toy suite", criterion_10},
      {11, "covariate projection", criterion_11},
  };

  bool all_pass = true;
  bool ran = false;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    const Stopwatch clock;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("criterion %2d %-48s %s  %s [%.1f s]\n", c.id, c.name.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), clock.seconds());
    std::fflush(stdout);
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
