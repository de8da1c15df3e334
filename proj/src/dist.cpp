#include "fiscal/dist.hpp"

#include <cmath>
#include <limits>

#include "fiscal/errors.hpp"

namespace fiscal {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-14;
constexpr double kTiny = 1e-300;

// Lower regularized incomplete gamma by series expansion (x < a+1).
double inc_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction (x >= a+1).
double inc_gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta (Lentz).
double inc_beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

void check_df(const DistSpec& d) {
  switch (d.kind) {
    case DistKind::Normal:
      return;
    case DistKind::StudentT:
    case DistKind::ChiSquare:
      if (!(d.df1 > 0.0)) throw ConfigError("distribution: degrees of freedom must be positive");
      return;
    case DistKind::FisherF:
      if (!(d.df1 > 0.0) || !(d.df2 > 0.0))
        throw ConfigError("distribution: degrees of freedom must be positive");
      return;
  }
}

}  // namespace

double reg_inc_gamma(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw ConfigError("reg_inc_gamma: invalid arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return inc_gamma_series(a, x);
  return 1.0 - inc_gamma_cf(a, x);
}

double reg_inc_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw ConfigError("reg_inc_beta: invalid shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbeta =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(lbeta);
  // Symmetry switch keeps the continued fraction in its fast-converging region.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * inc_beta_cf(a, b, x) / a;
  return 1.0 - front * inc_beta_cf(b, a, 1.0 - x) / b;
}

double cdf(const DistSpec& d, double x) {
  check_df(d);
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw ConfigError("cdf: x is NaN");
    return x > 0.0 ? 1.0 : 0.0;
  }
  switch (d.kind) {
    case DistKind::Normal:
      return 0.5 * std::erfc(-x / std::sqrt(2.0));
    case DistKind::StudentT: {
      if (x == 0.0) return 0.5;
      const double v = d.df1;
      const double p = 0.5 * reg_inc_beta(0.5 * v, 0.5, v / (v + x * x));
      return x > 0.0 ? 1.0 - p : p;
    }
    case DistKind::ChiSquare:
      if (x <= 0.0) return 0.0;
      return reg_inc_gamma(0.5 * d.df1, 0.5 * x);
    case DistKind::FisherF: {
      if (x <= 0.0) return 0.0;
      const double num = d.df1 * x;
      return reg_inc_beta(0.5 * d.df1, 0.5 * d.df2, num / (num + d.df2));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double tail_prob(const DistSpec& d, double stat, Tails tails) {
  check_df(d);
  if (tails == Tails::One) return 1.0 - cdf(d, stat);
  if (d.kind == DistKind::ChiSquare || d.kind == DistKind::FisherF)
    throw ConfigError("tail_prob: two-tailed probability undefined for asymmetric distribution");
  return 2.0 * (1.0 - cdf(d, std::fabs(stat)));
}

}  // namespace fiscal
