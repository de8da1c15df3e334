#include <doctest.h>

#include <cmath>

#include "fiscal/dist.hpp"

#include "oracles.hpp"

using namespace fiscal;

namespace {

// densities for quadrature cross-checks
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double t_pdf(double x, double v) {
  const double c = std::tgamma((v + 1.0) / 2.0) / (std::sqrt(v * M_PI) * std::tgamma(v / 2.0));
  return c * std::pow(1.0 + x * x / v, -(v + 1.0) / 2.0);
}

double chi2_pdf(double x, double k) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, k / 2.0 - 1.0) * std::exp(-x / 2.0) /
         (std::pow(2.0, k / 2.0) * std::tgamma(k / 2.0));
}

double f_pdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double lb = d1 / 2.0 * std::log(d1 * x) + d2 / 2.0 * std::log(d2) -
                    (d1 + d2) / 2.0 * std::log(d1 * x + d2);
  const double logbeta = std::lgamma(d1 / 2.0) + std::lgamma(d2 / 2.0) -
                         std::lgamma((d1 + d2) / 2.0);
  return std::exp(lb - logbeta) / x;
}

}  // namespace

TEST_CASE("normal cdf against known points and quadrature") {
  auto n = DistSpec::normal();
  CHECK(cdf(n, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cdf(n, 1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(cdf(n, -1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-9));
  for (double x : {-2.7, -0.3, 0.9, 3.1}) {
    const double q = 0.5 + oracle::simpson([](double t) { return normal_pdf(t); }, 0.0, x);
    CHECK(cdf(n, x) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("student t cdf") {
  auto t5 = DistSpec::student_t(5);
  CHECK(cdf(t5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  // 97.5% quantile of t(5) is 2.570581836...
  CHECK(cdf(t5, 2.570581835636197) == doctest::Approx(0.975).epsilon(1e-9));
  for (double x : {-1.3, 0.4, 2.2}) {
    const double q = 0.5 + oracle::simpson([](double v) { return t_pdf(v, 5.0); }, 0.0, x);
    CHECK(cdf(t5, x) == doctest::Approx(q).epsilon(1e-8));
  }
  // heavy tail: t(1) is Cauchy
  CHECK(cdf(DistSpec::student_t(1), 1.0) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("chi-square cdf") {
  auto c2 = DistSpec::chi_square(2);
  // chi2(2) is Exp(1/2)
  CHECK(cdf(c2, 3.0) == doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-12));
  auto c7 = DistSpec::chi_square(7);
  for (double x : {1.0, 6.5, 14.1}) {
    const double q = oracle::simpson([](double v) { return chi2_pdf(v, 7.0); }, 0.0, x);
    CHECK(cdf(c7, x) == doctest::Approx(q).epsilon(1e-8));
  }
}

TEST_CASE("F cdf") {
  auto f = DistSpec::fisher_f(4, 30);
  // 95% quantile of F(4,30) is 2.689628...
  CHECK(cdf(f, 2.689628) == doctest::Approx(0.95).epsilon(1e-5));
  for (double x : {0.5, 1.7, 3.3}) {
    const double q = oracle::simpson([](double v) { return f_pdf(v, 4.0, 30.0); }, 1e-12, x);
    CHECK(cdf(f, x) == doctest::Approx(q).epsilon(1e-7));
  }
}

TEST_CASE("tail probabilities") {
  CHECK(tail_prob(DistSpec::normal(), 1.959963984540054, Tails::Two) ==
        doctest::Approx(0.05).epsilon(1e-8));
  CHECK(tail_prob(DistSpec::student_t(10), -2.228138851986273, Tails::Two) ==
        doctest::Approx(0.05).epsilon(1e-8));
  // one-sided upper tail for chi2/F
  CHECK(tail_prob(DistSpec::chi_square(2), 3.0, Tails::One) ==
        doctest::Approx(std::exp(-1.5)).epsilon(1e-10));
  CHECK(tail_prob(DistSpec::fisher_f(4, 30), 2.689628, Tails::One) ==
        doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("incomplete gamma and beta edge behaviour") {
  CHECK(reg_inc_gamma(3.0, 0.0) == doctest::Approx(0.0));
  CHECK(reg_inc_gamma(3.0, 1e8) == doctest::Approx(1.0));
  CHECK(reg_inc_beta(2.0, 3.0, 0.0) == doctest::Approx(0.0));
  CHECK(reg_inc_beta(2.0, 3.0, 1.0) == doctest::Approx(1.0));
  // I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(reg_inc_beta(2.5, 4.0, 0.3) ==
        doctest::Approx(1.0 - reg_inc_beta(4.0, 2.5, 0.7)).epsilon(1e-12));
  // symmetric case at x = 1/2
  CHECK(reg_inc_beta(3.0, 3.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}
