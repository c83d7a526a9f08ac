#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wuseq/error.hpp"
#include "wuseq/phenotype.hpp"
#include "wuseq/ustat.hpp"

using namespace wuseq;

namespace {

auto from_offdiag(Index n, std::initializer_list<double> lower) -> SimilarityMatrix {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  auto it = lower.begin();
  for (Index i = 1; i < n; ++i) {
    for (Index j = 0; j < i; ++j) w(i, j) = w(j, i) = *it++;
  }
  return {w, SimilarityKind::WeightedIbs};
}

}  // namespace

TEST_CASE("scaling constant") {
  const auto flat = from_offdiag(4, {0.7, 0.7, 0.7, 0.7, 0.7, 0.7});
  CHECK(scaling_constant(flat, NormKind::L2).value == doctest::Approx(0.7));
  CHECK(scaling_constant(flat, NormKind::L1).value == doctest::Approx(0.7));

  const auto mixed = from_offdiag(4, {0.2, 0.2, 0.8, 0.8, 0.8, 0.8});
  CHECK(scaling_constant(mixed, NormKind::L2).value == doctest::Approx(0.6));
  CHECK(scaling_constant(mixed, NormKind::L1).value == doctest::Approx(0.8));

  // even count of distinct values: the lower median
  const auto even = from_offdiag(4, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  CHECK(scaling_constant(even, NormKind::L1).value == doctest::Approx(0.3));

  const auto pair = from_offdiag(2, {0.37});
  CHECK(scaling_constant(pair, NormKind::L2).value == doctest::Approx(0.37));
  CHECK(build_weight_matrix(pair, NormKind::L2).k.cwiseAbs().maxCoeff() < 1e-15);

  SUBCASE("diagonal is ignored") {
    auto w = mixed;
    w.w.diagonal().setConstant(5.0);
    CHECK(scaling_constant(w, NormKind::L2).value == doctest::Approx(0.6));
  }

  SUBCASE("non-positive c is clamped to the smallest positive entry") {
    const auto zeros = from_offdiag(3, {0.0, 0.0, 0.0});
    CHECK_THROWS_AS(scaling_constant(zeros, NormKind::L2), InputError);
    const auto some = from_offdiag(4, {0.0, 0.0, 0.0, 0.0, 0.3, 0.0});
    const auto c1 = scaling_constant(some, NormKind::L1);
    CHECK(c1.clamped);
    CHECK(c1.value == doctest::Approx(0.3));
    CHECK_FALSE(scaling_constant(some, NormKind::L2).clamped);
  }
  CHECK(parse_norm("L1") == NormKind::L1);
  CHECK(parse_norm("l2") == NormKind::L2);
  CHECK_THROWS_AS(parse_norm("L3"), InputError);
}

TEST_CASE("build_weight_matrix") {
  const auto w = from_offdiag(3, {0.2, 0.5, 0.8});
  const auto k = build_weight_matrix(w, NormKind::L2);
  CHECK(k.c.value == doctest::Approx(0.5));
  CHECK(k.k(1, 0) == doctest::Approx(-0.3));
  CHECK(k.k(2, 0) == doctest::Approx(0.0));
  CHECK(k.k(2, 1) == doctest::Approx(0.3));
  CHECK(k.k.diagonal().isZero(0.0));
  CHECK(k.k.trace() == 0.0);

  const auto flat = from_offdiag(3, {0.4, 0.4, 0.4});
  CHECK(build_weight_matrix(flat, NormKind::L2).k.isZero(1e-15));

  auto rng = make_rng(2);
  const auto r = testing::random_similarity(30, rng);
  const auto kr = build_weight_matrix(r, NormKind::L2);
  CHECK(std::fabs(kr.k.sum()) < 1e-9 * r.w.cwiseAbs().sum());
  CHECK(kr.k == kr.k.transpose());
}

TEST_CASE("wu_statistic matches the pairwise double sum") {
  auto rng = make_rng(13);
  CenteredWeightMatrix k{testing::random_symmetric_zero_diag(5, rng), {}};
  const auto q = testing::random_vector(5, rng);
  CHECK(testing::relative_error(wu_statistic(k, q), testing::pairwise_sum(k.k, q) / 20.0) < 1e-12);

  CenteredWeightMatrix zero{Eigen::MatrixXd::Zero(5, 5), {}};
  CHECK(wu_statistic(zero, q) == 0.0);
  CHECK(wu_statistic(k, Eigen::VectorXd::Zero(5)) == 0.0);
  CHECK_THROWS_AS(wu_statistic(k, Eigen::VectorXd::Zero(4)), InputError);
}

TEST_CASE("component form agrees with the quadratic form") {
  auto rng = make_rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 3 + rep % 20;
    const auto w = testing::random_similarity(n, rng);
    const QuantileVector q{testing::random_vector(n, rng), Transform::Quantile};
    for (auto norm : {NormKind::L1, NormKind::L2}) {
      const auto k = build_weight_matrix(w, norm);
      const auto u = u_components(w, q);
      CHECK(testing::relative_error(u.statistic(k.c.value), wu_statistic(k, q)) < 1e-10);
    }
  }

  SUBCASE("unit weights give equal components") {
    const Index n = 8;
    SimilarityMatrix ones{Eigen::MatrixXd::Ones(n, n), SimilarityKind::WeightedIbs};
    const QuantileVector q{testing::random_vector(n, rng), Transform::Quantile};
    const auto u = u_components(ones, q);
    CHECK(u.weighted == doctest::Approx(u.unweighted).epsilon(1e-14));
  }

  SUBCASE("unweighted U from the sum identity") {
    const Index n = 11;
    const auto w = testing::random_similarity(n, rng);
    const QuantileVector q{testing::random_vector(n, rng), Transform::Quantile};
    const double s = q.q.sum();
    const double expect = (s * s - q.q.squaredNorm()) / static_cast<double>(n * (n - 1));
    CHECK(u_components(w, q).unweighted == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("wu_statistic is invariant to consistent sample relabelling") {
  auto rng = make_rng(15);
  const Index n = 20;
  CenteredWeightMatrix k{testing::random_symmetric_zero_diag(n, rng), {}};
  const auto q = testing::random_vector(n, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + n, rng);
  CenteredWeightMatrix kp{perm * k.k * perm.transpose(), {}};
  const Eigen::VectorXd qp = perm * q;
  CHECK(testing::relative_error(wu_statistic(kp, qp), wu_statistic(k, q)) < 1e-12);
}

TEST_CASE("affine maps of W scale K") {
  auto rng = make_rng(16);
  const auto w = testing::random_similarity(15, rng);
  for (auto norm : {NormKind::L1, NormKind::L2}) {
    const auto k = build_weight_matrix(w, norm);
    SimilarityMatrix wa{0.5 * w.w.array() + 0.25, w.kind};
    const auto ka = build_weight_matrix(wa, norm);
    CHECK((ka.k - 0.5 * k.k).cwiseAbs().maxCoeff() < 1e-14);
  }
}
