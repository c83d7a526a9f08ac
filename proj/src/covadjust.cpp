#include "wuseq/covadjust.hpp"

#include <cmath>

#include "wuseq/error.hpp"

namespace wuseq {

auto projection_matrix(const CovariateMatrix& x) -> ProjectionContext {
  const Eigen::MatrixXd& design = x.design();
  const Index n = design.rows();
  const Index cols = design.cols();
  if (cols + 1 > n) throw InputError("too many covariates for the sample size");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw InputError("covariate matrix is rank deficient");

  ProjectionContext ctx;
  ctx.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, cols);
  ctx.h = Eigen::MatrixXd::Identity(n, n) - ctx.basis * ctx.basis.transpose();
  ctx.rank = qr.rank();
  return ctx;
}

auto project_residuals(const Eigen::VectorXd& q, const CovariateMatrix& x) -> ProjectedPhenotype {
  if (q.size() != x.n_samples()) throw InputError("covariates and phenotype differ in length");
  ProjectedPhenotype out{Eigen::VectorXd(), projection_matrix(x)};
  const Eigen::VectorXd resid = out.context.h * q;
  const double dof = static_cast<double>(x.n_samples() - x.design().cols());
  const double sigma2 = resid.squaredNorm() / dof;
  if (!(sigma2 > 1e-24 * std::max(1.0, q.squaredNorm()))) {
    throw InputError("phenotype fully explained by covariates");
  }
  out.context.sigma_hat = std::sqrt(sigma2);
  out.residuals = resid / out.context.sigma_hat;
  return out;
}

auto project_residuals(const QuantileVector& q, const CovariateMatrix& x) -> ProjectedPhenotype {
  return project_residuals(q.q, x);
}

auto adjusted_test(const CenteredWeightMatrix& k, const ProjectedPhenotype& projected)
    -> TestResult {
  const auto& h = projected.context.h;
  if (h.rows() != k.n()) throw InputError("projection and weight matrix differ in size");
  const double stat = wu_statistic(k, projected.residuals);
  // HKH = K - UA' - AU' + U(U'A)U' with A = KU; O(n^2 r) instead of O(n^3).
  const auto& u = projected.context.basis;
  const Eigen::MatrixXd a = k.k * u;
  const Eigen::MatrixXd uta = u.transpose() * a;
  Eigen::MatrixXd khat = k.k;
  khat.noalias() -= u * a.transpose();
  khat.noalias() -= a * u.transpose();
  khat.noalias() += u * (uta * u.transpose());
  auto res = mixture_test(
      stat, k.n(),
      match_permutation_variance(scaled_eigenvalues(khat, k.n()), k, projected.residuals));
  if (k.c.clamped) {
    res.diagnostics.warnings.emplace_back("scaling constant clamped to smallest positive similarity");
  }
  return res;
}

auto adjusted_test(const CenteredWeightMatrix& k, const QuantileVector& q,
                   const CovariateMatrix& x) -> TestResult {
  return adjusted_test(k, project_residuals(q, x));
}

}  // namespace wuseq
