#include "fiscal/var.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fiscal/dist.hpp"
#include "fiscal/errors.hpp"

namespace fiscal {

namespace {

// Osterwald-Lenum asymptotic critical values, unrestricted-constant case,
// indexed by k - r = 1..5. Columns: 90%, 95%, 99%.
const double kTraceCv[5][3] = {{2.69, 3.76, 6.65},
                               {13.33, 15.41, 20.04},
                               {26.79, 29.68, 35.65},
                               {43.95, 47.21, 54.46},
                               {64.84, 68.52, 76.07}};
const double kMaxEigCv[5][3] = {{2.69, 3.76, 6.65},
                                {12.07, 14.07, 18.63},
                                {18.60, 20.97, 25.52},
                                {24.73, 27.07, 32.24},
                                {30.90, 33.46, 38.77}};

std::map<double, bool> rank_decisions(const double cv[3], double stat) {
  return {{0.10, stat > cv[0]}, {0.05, stat > cv[1]}, {0.01, stat > cv[2]}};
}

std::optional<double> rank_p_approx(const double cv[3], double stat) {
  const double p[3] = {0.10, 0.05, 0.01};
  if (stat <= cv[0]) {
    // Extrapolate on the first segment, clamped.
    const double slope = (p[1] - p[0]) / (cv[1] - cv[0]);
    return std::min(0.999, p[0] + slope * (stat - cv[0]));
  }
  if (stat >= cv[2]) return 0.001;
  for (int i = 0; i < 2; ++i) {
    if (stat >= cv[i] && stat <= cv[i + 1]) {
      const double w = (stat - cv[i]) / (cv[i + 1] - cv[i]);
      return p[i] + w * (p[i + 1] - p[i]);
    }
  }
  return std::nullopt;
}

Eigen::MatrixXd residual_matrix(const std::vector<RegressionFit>& fits) {
  if (fits.empty()) throw DataError("diagnostics: no equations");
  const Eigen::Index n = fits.front().residuals.size();
  Eigen::MatrixXd U(n, static_cast<Eigen::Index>(fits.size()));
  for (std::size_t j = 0; j < fits.size(); ++j) {
    if (fits[j].residuals.size() != n)
      throw DataError("diagnostics: residual series have unequal lengths");
    U.col(static_cast<Eigen::Index>(j)) = fits[j].residuals;
  }
  return U;
}

ResidualDiagnostics diagnostics_from_residuals(Eigen::MatrixXd U, int lm_lags) {
  const Eigen::Index n = U.rows();
  const Eigen::Index k = U.cols();
  ResidualDiagnostics out;

  Eigen::MatrixXd Uc = U.rowwise() - U.colwise().mean();
  const Eigen::MatrixXd sigma = Uc.transpose() * Uc / static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericalError("diagnostics: singular residual covariance");

  // Joint Jarque-Bera on Cholesky-orthogonalized residuals, chi2 with 2k df.
  const Eigen::MatrixXd V =
      llt.matrixL().solve(Uc.transpose()).transpose();  // rows are P^-1 u_t
  double jb = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto col = V.col(j);
    const double m2 = col.squaredNorm() / n;
    double m3 = 0.0, m4 = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = col[t];
      m3 += v * v * v;
      m4 += v * v * v * v;
    }
    m3 /= n;
    m4 /= n;
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    jb += n * (skew * skew / 6.0 + (kurt - 3.0) * (kurt - 3.0) / 24.0);
  }
  out.jb_joint_stat = jb;
  out.jb_joint_p = tail_prob(DistSpec::chi_square(2.0 * k), jb, Tails::One);

  // Multivariate Breusch-Godfrey: auxiliary regression of u_t on an intercept
  // and lm_lags lags of all residuals, presample lags set to zero.
  if (lm_lags >= 1) {
    const Eigen::Index q = 1 + lm_lags * k;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, q);
    W.col(0).setOnes();
    for (int lag = 1; lag <= lm_lags; ++lag)
      for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index t = lag; t < n; ++t) W(t, 1 + (lag - 1) * k + j) = Uc(t - lag, j);
    const Eigen::MatrixXd B = (W.transpose() * W).ldlt().solve(W.transpose() * Uc);
    const Eigen::MatrixXd E = Uc - W * B;
    const Eigen::MatrixXd sigma_e = E.transpose() * E / static_cast<double>(n);
    const Eigen::MatrixXd ratio = llt.solve(sigma_e);
    const double lm = n * (static_cast<double>(k) - ratio.trace());
    out.lm_stat = std::max(0.0, lm);
    out.lm_p = tail_prob(DistSpec::chi_square(static_cast<double>(lm_lags) * k * k), out.lm_stat,
                         Tails::One);
  }
  return out;
}

}  // namespace

std::vector<RegressionFit> var_estimate(const std::vector<QuarterlySeries>& endogenous, int p,
                                        const std::vector<QuarterlySeries>& exogenous) {
  if (endogenous.empty()) throw DataError("var_estimate: no endogenous series");
  if (p < 1) throw ConfigError("var_estimate: lag order must be >= 1");

  std::vector<QuarterlySeries> all = endogenous;
  all.insert(all.end(), exogenous.begin(), exogenous.end());
  all = align(all);

  std::vector<int> lags(all.size(), 0);
  std::vector<bool> current(all.size(), false);
  for (std::size_t i = 0; i < endogenous.size(); ++i) lags[i] = p;
  for (std::size_t i = endogenous.size(); i < all.size(); ++i) current[i] = true;
  LagMatrix X = build_lag_matrix(all, lags, current);

  // Prepend the intercept.
  LagMatrix Xi;
  Xi.sample_start = X.sample_start;
  Xi.data.resize(X.rows(), X.cols() + 1);
  Xi.data.col(0).setOnes();
  Xi.data.rightCols(X.cols()) = X.data;
  Xi.columns.push_back("const");
  Xi.columns.insert(Xi.columns.end(), X.columns.begin(), X.columns.end());

  std::vector<RegressionFit> fits;
  fits.reserve(endogenous.size());
  for (std::size_t i = 0; i < endogenous.size(); ++i) {
    const QuarterlySeries dep = all[i].slice(Xi.sample_start, all[i].end());
    fits.push_back(ols_fit(dep.vector(), Xi));
  }
  return fits;
}

JohansenReport johansen_test(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                             const std::vector<QuarterlySeries>& exogenous_levels,
                             JohansenDet det_case) {
  (void)det_case;  // single supported case: unrestricted constant
  const int k = static_cast<int>(endogenous_levels.size());
  if (k < 2) throw DataError("johansen_test: need at least two endogenous series");
  if (p < 1) throw ConfigError("johansen_test: lag order must be >= 1");

  std::vector<QuarterlySeries> all = endogenous_levels;
  all.insert(all.end(), exogenous_levels.begin(), exogenous_levels.end());
  all = align(all);
  const int T = static_cast<int>(all.front().size());
  const int n = T - p;
  if (n < 5 * k) throw DataError("johansen_test: insufficient sample");

  // Differenced data; row t of dY corresponds to calendar index t+1.
  Eigen::MatrixXd dY(T - 1, k), Ylev(T, k);
  for (int j = 0; j < k; ++j) {
    for (int t = 0; t < T; ++t) Ylev(t, j) = all[j][t];
    for (int t = 1; t < T; ++t) dY(t - 1, j) = all[j][t] - all[j][t - 1];
  }
  const int nexog = static_cast<int>(exogenous_levels.size());
  Eigen::MatrixXd dZ(T - 1, nexog);
  for (int j = 0; j < nexog; ++j)
    for (int t = 1; t < T; ++t) dZ(t - 1, j) = all[k + j][t] - all[k + j][t - 1];

  // Auxiliary regressors: constant, p-1 lagged differences, current d(exog).
  const int q = 1 + (p - 1) * k + nexog;
  Eigen::MatrixXd W(n, q), Z0(n, k), Z1(n, k);
  for (int r = 0; r < n; ++r) {
    const int t = p - 1 + r;  // row into dY
    int c = 0;
    W(r, c++) = 1.0;
    for (int lag = 1; lag <= p - 1; ++lag)
      for (int j = 0; j < k; ++j) W(r, c++) = dY(t - lag, j);
    for (int j = 0; j < nexog; ++j) W(r, c++) = dZ(t, j);
    for (int j = 0; j < k; ++j) {
      Z0(r, j) = dY(t, j);
      Z1(r, j) = Ylev(t, j);  // level at calendar t (one before dY row t)
    }
  }

  const Eigen::MatrixXd WtW = W.transpose() * W;
  Eigen::LDLT<Eigen::MatrixXd> wldlt(WtW);
  const Eigen::MatrixXd R0 = Z0 - W * wldlt.solve(W.transpose() * Z0);
  const Eigen::MatrixXd R1 = Z1 - W * wldlt.solve(W.transpose() * Z1);

  const Eigen::MatrixXd S00 = R0.transpose() * R0 / n;
  const Eigen::MatrixXd S11 = R1.transpose() * R1 / n;
  const Eigen::MatrixXd S01 = R0.transpose() * R1 / n;

  Eigen::LLT<Eigen::MatrixXd> llt11(S11);
  Eigen::LDLT<Eigen::MatrixXd> ldlt00(S00);
  if (llt11.info() != Eigen::Success || ldlt00.info() != Eigen::Success)
    throw NumericalError("johansen_test: singular moment matrix");

  const Eigen::MatrixXd M = S01.transpose() * ldlt00.solve(S01);  // S10 S00^-1 S01
  const Eigen::MatrixXd L = llt11.matrixL();
  const Eigen::MatrixXd A =
      L.triangularView<Eigen::Lower>().solve(
          L.triangularView<Eigen::Lower>().solve(M).transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("johansen_test: eigen solve failed");

  JohansenReport rep;
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < k; ++i) order.emplace_back(es.eigenvalues()[i], i);
  std::sort(order.begin(), order.end(), [](auto& a, auto& b) { return a.first > b.first; });
  rep.beta_vectors.resize(k, k);
  for (int i = 0; i < k; ++i) {
    double lam = std::clamp(order[i].first, 0.0, 1.0 - 1e-12);
    rep.eigenvalues.push_back(lam);
    Eigen::VectorXd v = L.transpose().triangularView<Eigen::Upper>().solve(
        es.eigenvectors().col(order[i].second));
    // Normalize first coordinate with meaningful magnitude to 1.
    for (int j = 0; j < k; ++j) {
      if (std::fabs(v[j]) > 1e-10 * v.norm()) {
        v /= v[j];
        break;
      }
    }
    rep.beta_vectors.col(i) = v;
  }

  for (int r = 0; r < k; ++r) {
    double trace = 0.0;
    for (int i = r; i < k; ++i) trace -= n * std::log1p(-rep.eigenvalues[i]);
    const double maxeig = -n * std::log1p(-rep.eigenvalues[r]);
    rep.trace_stats.push_back(trace);
    rep.maxeig_stats.push_back(maxeig);
    const int idx = std::min(k - r, 5) - 1;
    rep.trace_reject.push_back(rank_decisions(kTraceCv[idx], trace));
    rep.maxeig_reject.push_back(rank_decisions(kMaxEigCv[idx], maxeig));
    rep.trace_p_approx.push_back(rank_p_approx(kTraceCv[idx], trace));
    rep.maxeig_p_approx.push_back(rank_p_approx(kMaxEigCv[idx], maxeig));
  }

  rep.selected_rank = k;
  for (int r = 0; r < k; ++r) {
    if (!rep.trace_reject[r].at(0.05)) {
      rep.selected_rank = r;
      break;
    }
  }

  const ResidualDiagnostics diag = diagnostics_from_residuals(R0, 4);
  rep.jarque_bera_joint_p = diag.jb_joint_p;
  rep.lm_serial_p = diag.lm_p;
  return rep;
}

VecmDesign build_vecm_design(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                             const std::vector<QuarterlySeries>& exogenous_levels,
                             const Eigen::VectorXd& beta) {
  const int k = static_cast<int>(endogenous_levels.size());
  if (p < 1) throw ConfigError("vecm_estimate: lag order must be >= 1");
  if (beta.size() != k || beta.norm() < 1e-12)
    throw ConfigError("vecm_estimate: invalid cointegrating vector");
  Eigen::VectorXd beta_n = beta;
  for (int j = 0; j < k; ++j) {
    if (std::fabs(beta_n[j]) > 1e-10 * beta_n.norm()) {
      beta_n /= beta_n[j];
      break;
    }
  }

  std::vector<QuarterlySeries> all = endogenous_levels;
  all.insert(all.end(), exogenous_levels.begin(), exogenous_levels.end());
  all = align(all);

  // Error-correction series ec_t = beta' Y_t and first differences.
  std::vector<double> ec(all.front().size());
  for (std::size_t t = 0; t < ec.size(); ++t) {
    double v = 0.0;
    for (int j = 0; j < k; ++j) v += beta_n[j] * all[j][t];
    ec[t] = v;
  }
  QuarterlySeries ec_series(all.front().start(), std::move(ec), "ec");

  std::vector<QuarterlySeries> regr_series;
  std::vector<int> lags;
  std::vector<bool> current;
  // delta-endogenous with p lags, no current (current is the dependent).
  std::vector<QuarterlySeries> dendo;
  for (int j = 0; j < k; ++j) {
    dendo.push_back(transform_diff(all[j], 1).renamed("d(" + all[j].name() + ")"));
    regr_series.push_back(dendo.back());
    lags.push_back(p);
    current.push_back(false);
  }
  // ec enters lagged one quarter: re-date the level series one quarter
  // forward so its value at date t is ec_{t-1}.
  regr_series.push_back(QuarterlySeries(ec_series.start().plus(1),
                                        std::vector<double>(ec_series.values().begin(),
                                                            ec_series.values().end() - 1),
                                        "ec(-1)"));
  lags.push_back(0);
  current.push_back(true);
  for (std::size_t j = k; j < all.size(); ++j) {
    regr_series.push_back(transform_diff(all[j], 1).renamed("d(" + all[j].name() + ")"));
    lags.push_back(0);
    current.push_back(true);
  }
  regr_series = align(regr_series);
  VecmDesign design;
  design.X = build_lag_matrix(regr_series, lags, current);
  design.beta = beta_n;
  for (int j = 0; j < k; ++j) {
    const QuarterlySeries dep =
        transform_diff(all[j], 1).slice(design.X.sample_start, all[j].end());
    design.dependents.push_back(dep.vector());
    design.dep_names.push_back("d(" + all[j].name() + ")");
  }
  return design;
}

VecmFit vecm_estimate(const std::vector<QuarterlySeries>& endogenous_levels, int p,
                      const std::vector<QuarterlySeries>& exogenous_levels,
                      const Eigen::VectorXd& beta) {
  VecmDesign design = build_vecm_design(endogenous_levels, p, exogenous_levels, beta);
  const LagMatrix& X = design.X;
  const int k = static_cast<int>(endogenous_levels.size());

  LagMatrix Xi;
  Xi.sample_start = X.sample_start;
  Xi.data.resize(X.rows(), X.cols() + 1);
  Xi.data.col(0).setOnes();
  Xi.data.rightCols(X.cols()) = X.data;
  Xi.columns.push_back("const");
  Xi.columns.insert(Xi.columns.end(), X.columns.begin(), X.columns.end());

  VecmFit out;
  out.beta = design.beta;
  out.lag_order = p;
  out.loadings.resize(k);
  for (int j = 0; j < k; ++j) {
    RegressionFit fit = ols_fit(design.dependents[j], Xi);
    out.loadings[j] = fit.coef("ec(-1)");
    out.equations.push_back(std::move(fit));
  }
  return out;
}

ResidualDiagnostics residual_diagnostics(const std::vector<RegressionFit>& fits, int lm_lags) {
  return diagnostics_from_residuals(residual_matrix(fits), lm_lags);
}

}  // namespace fiscal
