#include "wuseq/davies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace wuseq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2Over8 = 0.0866;

auto exp1(double x) -> double { return x < -50.0 ? 0.0 : std::exp(x); }

// first ? log(1 + x) : log(1 + x) - x, with a series for small |x|.
auto log1(double x, bool first) -> double {
  if (std::fabs(x) > 0.1) return first ? std::log1p(x) : std::log1p(x) - x;
  double y = x / (2.0 + x);
  double term = 2.0 * y * y * y;
  double k = 3.0;
  double s = (first ? 2.0 : -x) * y;
  y = y * y;
  for (double s1 = s + term / k; s1 != s; s1 = s + term / k) {
    k += 2.0;
    term *= y;
    s = s1;
  }
  return s;
}

struct BudgetExceeded {};

// Every chi-squared term has one degree of freedom; nc_ holds the
// noncentralities and sigma0_ the sd of the added normal term.
class Integrator {
 public:
  Integrator(const DaviesTerms& terms, double x, const DaviesOptions& opt)
      : lb_(terms.weights.begin(), terms.weights.end()),
        nc_(terms.noncentrality.begin(), terms.noncentrality.end()),
        c_(x),
        lim_(opt.max_terms),
        acc_(opt.accuracy),
        sigma0_(terms.sigma) {
    nc_.resize(lb_.size(), 0.0);
  }

  auto run() -> DaviesResult {
    DaviesResult res;
    res.error_bound = acc_;
    try {
      solve(res);
    } catch (const BudgetExceeded&) {
      res.fault = DaviesFault::NoIntegrationParameters;
      res.cdf = -1.0;
    }
    res.bound_evaluations = count_;
    return res;
  }

 private:
  void tick() {
    if (++count_ > lim_) throw BudgetExceeded{};
  }

  // Probability bound from the moment generating function; cutoff to *cx.
  auto errbd(double u, double* cx) -> double {
    tick();
    double xconst = u * sigsq_;
    double sum1 = u * xconst;
    u *= 2.0;
    for (auto j = lb_.size(); j-- > 0;) {
      const double lj = lb_[j];
      const double ncj = nc_[j];
      const double x = u * lj;
      const double y = 1.0 - x;
      xconst += lj * (ncj / y + 1.0) / y;
      sum1 += ncj * (x / y) * (x / y) + (x * x / y + log1(-x, false));
    }
    *cx = xconst;
    return exp1(-0.5 * sum1);
  }

  // Cutoff such that P(Q > cutoff) < accx if *upn > 0, P(Q < cutoff) < accx otherwise.
  auto ctff(double accx, double* upn) -> double {
    double u2 = *upn;
    double u1 = 0.0;
    double c1 = mean_;
    double c2 = 0.0;
    const double rb = 2.0 * (u2 > 0.0 ? lmax_ : lmin_);
    for (double u = u2 / (1.0 + u2 * rb); errbd(u, &c2) > accx; u = u2 / (1.0 + u2 * rb)) {
      u1 = u2;
      c1 = c2;
      u2 *= 2.0;
    }
    for (double u = (c1 - mean_) / (c2 - mean_); u < 0.9; u = (c1 - mean_) / (c2 - mean_)) {
      u = 0.5 * (u1 + u2);
      double xconst = 0.0;
      if (errbd(u / (1.0 + u * rb), &xconst) > accx) {
        u1 = u;
        c1 = xconst;
      } else {
        u2 = u;
        c2 = xconst;
      }
    }
    *upn = u2;
    return c2;
  }

  // Bound on integration error from truncating at u.
  auto truncation(double u, double tausq) -> double {
    tick();
    double sum1 = 0.0;
    double prod2 = 0.0;
    double prod3 = 0.0;
    int s = 0;
    const double sum2 = (sigsq_ + tausq) * u * u;
    double prod1 = 2.0 * sum2;
    u *= 2.0;
    for (std::size_t j = 0; j < lb_.size(); ++j) {
      const double x = (u * lb_[j]) * (u * lb_[j]);
      sum1 += nc_[j] * x / (1.0 + x);
      if (x > 1.0) {
        prod2 += std::log(x);
        prod3 += log1(x, true);
        ++s;
      } else {
        prod1 += log1(x, true);
      }
    }
    sum1 *= 0.5;
    prod2 += prod1;
    prod3 += prod1;
    double x = exp1(-sum1 - 0.25 * prod2) / kPi;
    const double y = exp1(-sum1 - 0.25 * prod3) / kPi;
    double err1 = s == 0 ? 1.0 : x * 2.0 / s;
    double err2 = prod3 > 1.0 ? 2.5 * y : 1.0;
    if (err2 < err1) err1 = err2;
    x = 0.5 * sum2;
    err2 = x <= y ? 1.0 : y / x;
    return err1 < err2 ? err1 : err2;
  }

  // u with truncation(u) <= accx and truncation(u / 1.2) > accx.
  void findu(double* utx, double accx) {
    static constexpr double divis[] = {2.0, 1.4, 1.2, 1.1};
    double ut = *utx;
    double u = ut / 4.0;
    if (truncation(u, 0.0) > accx) {
      for (u = ut; truncation(u, 0.0) > accx; u = ut) ut *= 4.0;
    } else {
      ut = u;
      for (u /= 4.0; truncation(u, 0.0) <= accx; u /= 4.0) ut = u;
    }
    for (double d : divis) {
      u = ut / d;
      if (truncation(u, 0.0) <= accx) ut = u;
    }
    *utx = ut;
  }

  // nterm + 1 terms at step interv; unless main, the integrand carries the
  // factor 1 - exp(-tausq u^2 / 2).
  void integrate(int nterm, double interv, double tausq, bool main) {
    const double inpi = interv / kPi;
    for (int k = nterm; k >= 0; --k) {
      const double u = (k + 0.5) * interv;
      double sum1 = -2.0 * u * c_;
      double sum2 = std::fabs(sum1);
      double sum3 = -0.5 * sigsq_ * u * u;
      for (auto j = lb_.size(); j-- > 0;) {
        const double x = 2.0 * lb_[j] * u;
        double y = x * x;
        sum3 -= 0.25 * log1(y, true);
        y = nc_[j] * x / (1.0 + y);
        const double z = std::atan(x) + y;
        sum1 += z;
        sum2 += std::fabs(z);
        sum3 -= 0.5 * x * y;
      }
      double x = inpi * exp1(sum3) / u;
      if (!main) x *= 1.0 - exp1(-0.5 * tausq * u * u);
      intl_ += std::sin(0.5 * sum1) * x;
      ersm_ += 0.5 * sum2 * x;
    }
  }

  // Coefficient of tausq in the error when the convergence factor
  // exp(-tausq u^2 / 2) is used and the CDF is evaluated at x.
  auto cfe(double x) -> double {
    tick();
    if (!sorted_) {
      order_.resize(lb_.size());
      std::iota(order_.begin(), order_.end(), std::size_t{0});
      std::stable_sort(order_.begin(), order_.end(),
                       [&](auto a, auto b) { return std::fabs(lb_[a]) > std::fabs(lb_[b]); });
      sorted_ = true;
    }
    double axl = std::fabs(x);
    const double sxl = x > 0.0 ? 1.0 : -1.0;
    double sum1 = 0.0;
    for (auto j = order_.size(); j-- > 0;) {
      const auto t = order_[j];
      if (lb_[t] * sxl > 0.0) {
        const double lj = std::fabs(lb_[t]);
        const double axl1 = axl - lj * (1.0 + nc_[t]);
        const double axl2 = lj / kLog2Over8;
        if (axl1 > axl2) {
          axl = axl1;
        } else {
          if (axl > axl2) axl = axl2;
          sum1 = (axl - axl1) / lj;
          for (auto k = j; k-- > 0;) sum1 += 1.0 + nc_[order_[k]];
          break;
        }
      }
    }
    if (sum1 > 100.0) {
      fail_ = true;
      return 1.0;
    }
    return std::pow(2.0, sum1 / 4.0) / (kPi * axl * axl);
  }

  void solve(DaviesResult& res) {
    if (!std::isfinite(sigma0_) || sigma0_ < 0.0) {
      res.fault = DaviesFault::InvalidInput;
      return;
    }
    sigsq_ = sigma0_ * sigma0_;
    double sd = sigsq_;
    for (std::size_t j = 0; j < lb_.size(); ++j) {
      const double lj = lb_[j];
      const double ncj = nc_[j];
      if (!std::isfinite(lj) || !std::isfinite(ncj) || ncj < 0.0) {
        res.fault = DaviesFault::InvalidInput;
        return;
      }
      sd += lj * lj * (2.0 + 4.0 * ncj);
      mean_ += lj * (1.0 + ncj);
      if (lmax_ < lj) {
        lmax_ = lj;
      } else if (lmin_ > lj) {
        lmin_ = lj;
      }
    }
    if (sd == 0.0) {
      res.cdf = c_ > 0.0 ? 1.0 : 0.0;
      return;
    }
    sd = std::sqrt(sd);
    const double almx = lmax_ < -lmin_ ? -lmin_ : lmax_;

    double utx = 16.0 / sd;
    double up = 4.5 / sd;
    double un = -up;
    double acc1 = acc_;
    double xlim = static_cast<double>(lim_);
    double tausq = 0.0;

    findu(&utx, 0.5 * acc1);
    // Does a convergence factor help?
    if (c_ != 0.0 && almx > 0.07 * sd) {
      tausq = 0.25 * acc1 / cfe(c_);
      if (fail_) {
        fail_ = false;
      } else if (truncation(utx, tausq) < 0.2 * acc1) {
        sigsq_ += tausq;
        findu(&utx, 0.25 * acc1);
        res.convergence_sd = std::sqrt(tausq);
      }
    }
    res.truncation_point = utx;
    acc1 *= 0.5;

    double intv = 0.0;
    double xnt = 0.0;
    while (true) {
      // Range of the distribution; outside it the answer is 0 or 1.
      const double d1 = ctff(acc1, &up) - c_;
      if (d1 < 0.0) {
        res.cdf = 1.0;
        return;
      }
      const double d2 = c_ - ctff(acc1, &un);
      if (d2 < 0.0) {
        res.cdf = 0.0;
        return;
      }
      intv = 2.0 * kPi / std::max(d1, d2);
      xnt = utx / intv;
      const double xntm = 3.0 / std::sqrt(acc1);
      if (!(xnt > xntm * 1.5)) break;

      // Auxiliary integration with a convergence factor.
      if (xntm > xlim) {
        res.fault = DaviesFault::AccuracyNotMet;
        return;
      }
      const int ntm = static_cast<int>(std::floor(xntm + 0.5));
      const double intv1 = utx / ntm;
      const double x = 2.0 * kPi / intv1;
      if (x <= std::fabs(c_)) break;
      tausq = 0.33 * acc1 / (1.1 * (cfe(c_ - x) + cfe(c_ + x)));
      if (fail_) break;
      acc1 *= 0.67;
      integrate(ntm, intv1, tausq, false);
      xlim -= xntm;
      sigsq_ += tausq;
      res.integrations += 1;
      res.terms += ntm + 1;
      findu(&utx, 0.25 * acc1);
      acc1 *= 0.75;
    }

    res.interval = intv;
    if (xnt > xlim) {
      res.fault = DaviesFault::AccuracyNotMet;
      return;
    }
    const int nt = static_cast<int>(std::floor(xnt + 0.5));
    integrate(nt, intv, 0.0, true);
    res.integrations += 1;
    res.terms += nt + 1;
    res.cdf = 0.5 - intl_;
    res.absolute_sum = ersm_;

    // Round-off check, allowing for radix 8 or 16 arithmetic.
    const double up_sum = ersm_;
    const double x = up_sum + acc_ / 10.0;
    for (double rat : {1.0, 2.0, 4.0, 8.0}) {
      if (rat * x == rat * up_sum) res.fault = DaviesFault::RoundOff;
    }
  }

  std::vector<double> lb_;
  std::vector<double> nc_;
  std::vector<std::size_t> order_;
  double c_;
  int lim_;
  double acc_;
  double sigma0_;
  double sigsq_ = 0.0;
  double lmax_ = 0.0;
  double lmin_ = 0.0;
  double mean_ = 0.0;
  double intl_ = 0.0;
  double ersm_ = 0.0;
  int count_ = 0;
  bool sorted_ = false;
  bool fail_ = false;
};

}  // namespace

auto davies_cdf(const DaviesTerms& terms, double x, const DaviesOptions& options) -> DaviesResult {
  const bool nc_ok = terms.noncentrality.empty() || terms.noncentrality.size() == terms.weights.size();
  if ((terms.weights.empty() && !(terms.sigma > 0.0)) || !nc_ok || !std::isfinite(x) ||
      !(options.accuracy > 0.0) || options.max_terms < 1) {
    DaviesResult res;
    res.fault = DaviesFault::InvalidInput;
    return res;
  }
  return Integrator(terms, x, options).run();
}

auto davies_cdf(std::span<const double> weights, double x, const DaviesOptions& options)
    -> DaviesResult {
  return davies_cdf(DaviesTerms{weights, {}, 0.0}, x, options);
}

}  // namespace wuseq
