#include "wuseq/baseline.hpp"

#include <cmath>
#include <string>

#include "wuseq/covadjust.hpp"
#include "wuseq/error.hpp"

namespace wuseq {

auto to_string(BaselineKind kind) -> std::string_view {
  return kind == BaselineKind::Score ? "score" : "off-diagonal";
}

auto parse_baseline_kind(std::string_view text) -> BaselineKind {
  if (text == "score") return BaselineKind::Score;
  if (text == "off-diagonal") return BaselineKind::OffDiagonal;
  throw InputError("unknown baseline '" + std::string(text) + "'");
}

auto baseline_test(const SimilarityMatrix& w, const Eigen::VectorXd& y, const CovariateMatrix& x,
                   BaselineKind kind, NormKind norm) -> TestResult {
  if (w.n() != y.size() || x.n_samples() != y.size()) {
    throw InputError("baseline inputs differ in length");
  }
  if (!y.allFinite()) throw InputError("phenotype values must be finite");
  if ((y.array() == y(0)).all()) throw InputError("degenerate phenotype");

  const auto projected = project_residuals(y, x);
  const Index n = w.n();

  if (kind == BaselineKind::OffDiagonal) {
    return adjusted_test(build_weight_matrix(w, norm), projected);
  }

  const auto& e = projected.residuals;
  const auto& u = projected.context.basis;
  const Eigen::MatrixXd a = w.w * u;
  Eigen::MatrixXd hwh = w.w;
  hwh.noalias() -= u * a.transpose();
  hwh.noalias() -= a * u.transpose();
  hwh.noalias() += u * ((u.transpose() * a) * u.transpose());

  // mixture_test scales by n / (n - 1); undo it so the weights are the raw
  // eigenvalues of HWH and the threshold is e'We itself.
  const double score = e.dot(w.w * e);
  auto spec = scaled_eigenvalues(hwh, n);
  const double scale = static_cast<double>(n - 1);
  for (double& l : spec.lambdas) l *= scale;
  auto res = mixture_test(score / static_cast<double>(n), n, spec);
  res.statistic = score;
  return res;
}

}  // namespace wuseq
