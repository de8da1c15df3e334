#pragma once

namespace fiscal {

enum class DistKind { Normal, StudentT, ChiSquare, FisherF };

enum class Tails { One, Two };

struct DistSpec {
  DistKind kind = DistKind::Normal;
  double df1 = 0.0;  // df for t and chi-square, numerator df for F
  double df2 = 0.0;  // denominator df for F

  static DistSpec normal() { return {DistKind::Normal, 0.0, 0.0}; }
  static DistSpec student_t(double df) { return {DistKind::StudentT, df, 0.0}; }
  static DistSpec chi_square(double df) { return {DistKind::ChiSquare, df, 0.0}; }
  static DistSpec fisher_f(double df1, double df2) { return {DistKind::FisherF, df1, df2}; }
};

double cdf(const DistSpec& d, double x);

double tail_prob(const DistSpec& d, double stat, Tails tails);

// Regularized incomplete gamma P(a,x) and incomplete beta I_x(a,b); exposed
// because the unit-root and Johansen p-value interpolators reuse them.
double reg_inc_gamma(double a, double x);
double reg_inc_beta(double a, double b, double x);

}  // namespace fiscal
