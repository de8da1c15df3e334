#pragma once

// Independent reference implementations used to cross-check the library:
// deliberately naive (dense solves, brute-force projections, quadrature) and
// kept free of any code from src/.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// HP trend by dense solve of (I + lambda D'D) tau = y.
inline Eigen::VectorXd hp_trend_dense(const Eigen::VectorXd& y, double lambda) {
  const Eigen::Index T = y.size();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(T - 2, T);
  for (Eigen::Index i = 0; i < T - 2; ++i) {
    D(i, i) = 1.0;
    D(i, i + 1) = -2.0;
    D(i, i + 2) = 1.0;
  }
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(T, T) + lambda * D.transpose() * D;
  return A.ldlt().solve(y);
}

// OLS by normal equations.
inline Eigen::VectorXd ols_normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

// F statistic for H0: the last q coefficients are zero, via RSS ratio.
inline double f_stat_rss_ratio(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int q) {
  const Eigen::Index n = X.rows(), k = X.cols();
  const Eigen::VectorXd b_full = ols_normal_equations(X, y);
  const double rss_full = (y - X * b_full).squaredNorm();
  const Eigen::MatrixXd Xr = X.leftCols(k - q);
  const Eigen::VectorXd b_r = ols_normal_equations(Xr, y);
  const double rss_r = (y - Xr * b_r).squaredNorm();
  return ((rss_r - rss_full) / q) / (rss_full / static_cast<double>(n - k));
}

// Adaptive Simpson quadrature for density integration.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// ---- SVR dual oracle -------------------------------------------------------
//
// Solves min 0.5 b'Kb - y'b + eps*||b||_1  s.t. sum(b)=0, |b_i|<=C by
// projected gradient on the split variables (a, a*) >= 0, a_i, a*_i <= C,
// sum(a - a*) = 0. Projection onto the box-intersect-hyperplane set is done
// by bisection on the shift multiplier.

inline Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& v, double lo, double hi,
                                              const Eigen::VectorXd& sign) {
  // minimize ||x - v||^2 s.t. lo <= x <= hi, sign'x = 0
  auto clamped_sum = [&](double t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double xi = std::min(hi, std::max(lo, v[i] - t * sign[i]));
      s += sign[i] * xi;
    }
    return s;
  };
  double a = -1e6, b = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (clamped_sum(mid) > 0.0) a = mid;
    else b = mid;
  }
  const double t = 0.5 * (a + b);
  Eigen::VectorXd x(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    x[i] = std::min(hi, std::max(lo, v[i] - t * sign[i]));
  return x;
}

struct SvrDualOracle {
  Eigen::VectorXd beta;  // a - a*
  double objective = 0.0;
};

inline double svr_dual_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double eps,
                                 const Eigen::VectorXd& beta) {
  return 0.5 * beta.dot(K * beta) - y.dot(beta) + eps * beta.cwiseAbs().sum();
}

inline SvrDualOracle svr_dual_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                                    double eps, int iters = 200000) {
  const Eigen::Index n = K.rows();
  // split variables z = [a; a*], beta = a - a*
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
  Eigen::VectorXd sign(2 * n);
  sign.head(n).setOnes();
  sign.tail(n) = -Eigen::VectorXd::Ones(n);
  const double L = K.operatorNorm() + 1e-12;
  const double step = 1.0 / (2.0 * L);
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd beta = z.head(n) - z.tail(n);
    const Eigen::VectorXd kb = K * beta;
    Eigen::VectorXd grad(2 * n);
    grad.head(n) = kb - y + Eigen::VectorXd::Constant(n, eps);
    grad.tail(n) = -kb + y + Eigen::VectorXd::Constant(n, eps);
    const Eigen::VectorXd z_new = project_box_hyperplane(z - step * grad, 0.0, C, sign);
    const double move = (z_new - z).lpNorm<Eigen::Infinity>();
    z = z_new;
    if (move < 1e-13) break;
  }
  SvrDualOracle out;
  out.beta = z.head(n) - z.tail(n);
  out.objective = svr_dual_objective(K, y, eps, out.beta);
  return out;
}

// deterministic standard-normal draws
inline Eigen::VectorXd randn(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace oracle
