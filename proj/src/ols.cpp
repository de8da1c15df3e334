#include "fiscal/ols.hpp"

#include <cmath>

#include "fiscal/dist.hpp"
#include "fiscal/errors.hpp"

namespace fiscal {

int RegressionFit::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

double RegressionFit::coef(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw ConfigError("no coefficient named '" + name + "'");
  return coefficients[i];
}

QuarterlySeries RegressionFit::residual_series(const std::string& name) const {
  std::vector<double> v(residuals.data(), residuals.data() + residuals.size());
  return QuarterlySeries(sample_start, std::move(v), name);
}

RegressionFit ols_fit(const Eigen::VectorXd& y, const LagMatrix& X, const SeKind& se) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) throw DataError("ols_fit: y length does not match regressor rows");
  if (n <= k) throw DataError("ols_fit: more regressors than observations");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.data);
  const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  if (dmin <= 0.0 || dmax / dmin > 1e12) {
    // Name the column the pivoting pushed last; that is the most collinear one.
    const auto perm = qr.colsPermutation().indices();
    const int worst = perm[k - 1];
    throw NumericalError("ols_fit: rank-deficient regressor matrix (column '" +
                         (worst < static_cast<int>(X.columns.size()) ? X.columns[worst] : "?") +
                         "' is collinear)");
  }

  RegressionFit fit;
  fit.names = X.columns;
  fit.sample_start = X.sample_start;
  fit.nobs = static_cast<int>(n);
  fit.nregressors = static_cast<int>(k);
  fit.coefficients = qr.solve(y);
  fit.residuals = y - X.data * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();

  const double dof = static_cast<double>(n - k);
  const Eigen::MatrixXd xtx_inv =
      (X.data.transpose() * X.data).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  if (se.newey_west) {
    // HAC covariance with Bartlett weights up to the given bandwidth.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::VectorXd xt = X.data.row(t).transpose() * fit.residuals[t];
      S += xt * xt.transpose();
    }
    for (int l = 1; l <= se.bandwidth; ++l) {
      const double w = 1.0 - static_cast<double>(l) / (se.bandwidth + 1.0);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index t = l; t < n; ++t) {
        const Eigen::VectorXd xt = X.data.row(t).transpose() * fit.residuals[t];
        const Eigen::VectorXd xl = X.data.row(t - l).transpose() * fit.residuals[t - l];
        G += xt * xl.transpose();
      }
      S += w * (G + G.transpose());
    }
    fit.coef_covariance = xtx_inv * S * xtx_inv;
  } else {
    fit.coef_covariance = (fit.rss / dof) * xtx_inv;
  }

  fit.standard_errors.resize(k);
  fit.t_stats.resize(k);
  fit.p_values.resize(k);
  const DistSpec tdist = DistSpec::student_t(dof);
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.standard_errors[j] = std::sqrt(std::max(0.0, fit.coef_covariance(j, j)));
    fit.t_stats[j] =
        fit.standard_errors[j] > 0.0 ? fit.coefficients[j] / fit.standard_errors[j] : 0.0;
    fit.p_values[j] = tail_prob(tdist, fit.t_stats[j], Tails::Two);
  }
  return fit;
}

}  // namespace fiscal
