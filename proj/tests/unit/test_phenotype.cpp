#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wuseq/error.hpp"
#include "wuseq/phenotype.hpp"

using namespace wuseq;

namespace {

// Bisection on Phi(x) = erfc(-x / sqrt 2) / 2 in long double.
auto phi_inverse_oracle(double p) -> double {
  long double lo = -40.0L, hi = 40.0L;
  const long double target = p;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    const long double cdf = 0.5L * std::erfc(-mid / std::sqrt(2.0L));
    (cdf < target ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

auto vec(std::initializer_list<double> v) -> Eigen::VectorXd {
  return Eigen::Map<const Eigen::VectorXd>(v.begin(), static_cast<Index>(v.size()));
}

}  // namespace

TEST_CASE("rank_with_ties") {
  CHECK(rank_with_ties(vec({3.1, 1.0, 2.5})) == vec({3, 1, 2}));
  CHECK(rank_with_ties(vec({5, 5, 5, 5})) == vec({2.5, 2.5, 2.5, 2.5}));
  CHECK(rank_with_ties(vec({2, 1, 2, 3})) == vec({2.5, 1, 2.5, 4}));

  // binary: controls share (n0 + 1) / 2, cases (n0 + 1 + n) / 2
  const auto r = rank_with_ties(vec({0, 1, 0, 0, 1, 0, 1}));
  const double n0 = 4;
  for (Index i : {0, 2, 3, 5}) CHECK(r(i) == (n0 + 1) / 2);
  for (Index i : {1, 4, 6}) CHECK(r(i) == 6.0);

  auto rng = make_rng(4);
  const auto y = testing::random_vector(101, rng);
  CHECK(rank_with_ties(y).sum() == doctest::Approx(101.0 * 102.0 / 2.0));
}

TEST_CASE("inverse_normal_cdf matches an erf-based oracle to 1e-10") {
  double worst = 0.0;
  for (double lp = -7.0; lp <= -0.30103; lp += 0.01) {
    const double p = std::pow(10.0, lp);
    worst = std::max(worst, std::fabs(inverse_normal_cdf(p) - phi_inverse_oracle(p)));
    worst = std::max(worst, std::fabs(inverse_normal_cdf(1.0 - p) - phi_inverse_oracle(1.0 - p)));
  }
  for (double p = 0.01; p < 0.995; p += 0.0137) {
    worst = std::max(worst, std::fabs(inverse_normal_cdf(p) - phi_inverse_oracle(p)));
  }
  CHECK(worst < 1e-10);
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), InputError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), InputError);
}

TEST_CASE("quantile transform of four distinct values") {
  const auto q = quantile_transform(vec({10, -3, 7, 0})).q;
  // rank order: -3, 0, 7, 10
  CHECK(q(1) == doctest::Approx(phi_inverse_oracle(0.125)).epsilon(1e-12));
  CHECK(q(3) == doctest::Approx(phi_inverse_oracle(0.375)).epsilon(1e-12));
  CHECK(q(2) == doctest::Approx(phi_inverse_oracle(0.625)).epsilon(1e-12));
  CHECK(q(0) == doctest::Approx(phi_inverse_oracle(0.875)).epsilon(1e-12));
  CHECK(q(0) == doctest::Approx(1.1503).epsilon(1e-4));
  CHECK(q(3) == doctest::Approx(-0.3186).epsilon(1e-3));
}

TEST_CASE("quantile transform invariants") {
  auto rng = make_rng(10);
  const auto y = testing::random_vector(57, rng);
  const auto q = quantile_transform(y).q;

  SUBCASE("strictly increasing maps give identical output") {
    const Eigen::VectorXd e = y.array().exp();
    const Eigen::VectorXd a = 3.0 * y.array() - 2.0;
    const Eigen::VectorXd c = y.array().cube();
    CHECK(quantile_transform(e).q == q);
    CHECK(quantile_transform(a).q == q);
    CHECK(quantile_transform(c).q == q);
    CHECK(quantile_transform(e, Transform::Rank).q == quantile_transform(y, Transform::Rank).q);
  }

  SUBCASE("reversing the order negates q") {
    const Eigen::VectorXd neg = -y;
    CHECK(quantile_transform(neg).q == -q);
  }

  SUBCASE("distinct values give a mean-zero grid") {
    CHECK(std::fabs(q.mean()) < 1e-12);
  }

  SUBCASE("rank variant is centred with unit sample variance") {
    const auto r = quantile_transform(y, Transform::Rank).q;
    CHECK(std::fabs(r.mean()) < 1e-12);
    CHECK((r.squaredNorm() / 56.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("quantile transform with ties and degenerate input") {
  const auto q = quantile_transform(vec({0, 1, 0, 1, 1})).q;
  CHECK(q(0) == q(2));
  CHECK(q(1) == q(4));
  CHECK(q(0) < 0.0);
  CHECK_THROWS_WITH_AS(quantile_transform(vec({1, 1})), "degenerate phenotype", InputError);
  CHECK_THROWS_WITH_AS(quantile_transform(vec({2, 2, 2}), Transform::Rank), "degenerate phenotype",
                       InputError);
  CHECK_THROWS_AS(quantile_transform(vec({1, std::nan("")})), InputError);
  CHECK(parse_transform("rank") == Transform::Rank);
  CHECK_THROWS_AS(parse_transform("log"), InputError);
}
