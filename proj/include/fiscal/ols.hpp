#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fiscal/series.hpp"

namespace fiscal {

struct SeKind {
  bool newey_west = false;
  int bandwidth = 4;

  static SeKind plain() { return {false, 0}; }
  static SeKind nw(int bw) { return {true, bw}; }
};

// OLS output bundle. Residuals keep the regression sample's dates.
struct RegressionFit {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  Quarter sample_start;
  double rss = 0.0;
  Eigen::MatrixXd coef_covariance;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;
  int nobs = 0;
  int nregressors = 0;

  int index_of(const std::string& name) const;  // -1 if absent
  double coef(const std::string& name) const;
  QuarterlySeries residual_series(const std::string& name) const;
};

// Least squares via column-pivoted QR; p-values from t(nobs - k).
RegressionFit ols_fit(const Eigen::VectorXd& y, const LagMatrix& X,
                      const SeKind& se = SeKind::plain());

}  // namespace fiscal
