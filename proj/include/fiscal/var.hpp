#pragma once

#include <optional>
#include <vector>

#include "fiscal/ols.hpp"
#include "fiscal/series.hpp"

namespace fiscal {

// Deterministic term handling in the Johansen step.
enum class JohansenDet {
  UnrestrictedConstant,  // intercept outside the cointegrating relation
};

struct VecmFit {
  std::vector<RegressionFit> equations;  // one per endogenous variable
  Eigen::VectorXd beta;                  // cointegrating vector, first nonzero coord = 1
  Eigen::VectorXd loadings;              // coefficient on ec(-1) per equation
  int lag_order = 0;
};

struct JohansenReport {
  std::vector<double> eigenvalues;   // descending, in [0,1)
  std::vector<double> trace_stats;   // by hypothesized rank r = 0..k-1
  std::vector<double> maxeig_stats;
  std::vector<std::map<double, bool>> trace_reject;   // per rank: level -> reject
  std::vector<std::map<double, bool>> maxeig_reject;
  std::vector<std::optional<double>> trace_p_approx;
  std::vector<std::optional<double>> maxeig_p_approx;
  int selected_rank = 0;
  Eigen::MatrixXd beta_vectors;  // columns are eigenvectors in level space
  double jarque_bera_joint_p = 1.0;
  double lm_serial_p = 1.0;
  // Asymptotic tables only; the shift from exogenous regressors is not applied.
  bool exogenous_adjustment_applied = false;
};

// Equation-by-equation OLS of each endogenous series on an intercept,
// p lags of all endogenous series, and the current exogenous values.
std::vector<RegressionFit> var_estimate(const std::vector<QuarterlySeries>& endogenous, int p,
                                        const std::vector<QuarterlySeries>& exogenous);

// Johansen reduced-rank regression on a level-VAR of order p (p-1 lagged
// differences enter the auxiliary regressions). Exogenous series enter in
// first differences.
JohansenReport johansen_test(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                             const std::vector<QuarterlySeries>& exogenous_levels,
                             JohansenDet det_case = JohansenDet::UnrestrictedConstant);

// Shared VECM design: regressors ec(-1), p lags of delta-Y, current
// delta-exog (no intercept), plus the per-equation delta-Y dependents.
struct VecmDesign {
  LagMatrix X;
  std::vector<Eigen::VectorXd> dependents;
  std::vector<std::string> dep_names;
  Eigen::VectorXd beta;  // normalized
};

VecmDesign build_vecm_design(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                             const std::vector<QuarterlySeries>& exogenous_levels,
                             const Eigen::VectorXd& beta);

// VECM: each delta-Y equation on intercept, ec(-1) = beta'Y(-1), p lags of
// delta-Y and current delta-exog. Inputs are levels.
VecmFit vecm_estimate(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                      const std::vector<QuarterlySeries>& exogenous_levels,
                      const Eigen::VectorXd& beta);

struct ResidualDiagnostics {
  double jb_joint_stat = 0.0;
  double jb_joint_p = 1.0;
  double lm_stat = 0.0;
  double lm_p = 1.0;
};

// Joint Jarque-Bera on the Cholesky-orthogonalized residual system and a
// multivariate Breusch-Godfrey LM test up to lm_lags.
ResidualDiagnostics residual_diagnostics(const std::vector<RegressionFit>& fits, int lm_lags = 4);

}  // namespace fiscal
