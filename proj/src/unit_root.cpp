#include "fiscal/unit_root.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fiscal/errors.hpp"
#include "fiscal/ols.hpp"

namespace fiscal {

namespace {

// Asymptotic quantiles of the Dickey-Fuller t distribution, intercept+trend
// case (Fuller's tau_tau table, n = infinity). Used for approximate p-values
// by linear interpolation.
const std::vector<std::pair<double, double>> kDfTrendQuantiles = {
    {0.010, -3.96}, {0.025, -3.66}, {0.050, -3.41}, {0.100, -3.12}, {0.500, -2.18},
    {0.900, -1.25}, {0.950, -0.94}, {0.975, -0.66}, {0.990, -0.33}};

std::optional<double> interp_p(const std::vector<std::pair<double, double>>& grid, double stat,
                               bool increasing_in_stat) {
  // grid holds (p, critical value) with cv monotone in p.
  double lo_cv = grid.front().second, hi_cv = grid.back().second;
  if (!increasing_in_stat) std::swap(lo_cv, hi_cv);
  if ((increasing_in_stat && (stat < std::min(lo_cv, hi_cv) || stat > std::max(lo_cv, hi_cv))) ||
      (!increasing_in_stat && (stat < std::min(lo_cv, hi_cv) || stat > std::max(lo_cv, hi_cv)))) {
    // Clamp only for the wide ADF grid; narrow grids return no estimate.
    return std::nullopt;
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double c0 = grid[i].second, c1 = grid[i + 1].second;
    const double lo = std::min(c0, c1), hi = std::max(c0, c1);
    if (stat >= lo && stat <= hi) {
      const double w = (c1 == c0) ? 0.0 : (stat - c0) / (c1 - c0);
      return grid[i].first + w * (grid[i + 1].first - grid[i].first);
    }
  }
  return std::nullopt;
}

std::map<double, bool> decisions(const CriticalValueTable& table, double stat) {
  std::map<double, bool> out;
  for (const auto& [level, cv] : table.cv) out[level] = table.reject(stat, level);
  return out;
}

// Single-column helpers building small design matrices directly.
LagMatrix concat_columns(const std::vector<std::pair<std::string, Eigen::VectorXd>>& cols,
                         Quarter start) {
  LagMatrix X;
  X.sample_start = start;
  X.data.resize(cols.front().second.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    X.data.col(static_cast<Eigen::Index>(j)) = cols[j].second;
    X.columns.push_back(cols[j].first);
  }
  return X;
}

struct AdfFit {
  RegressionFit fit;
  double t_rho = 0.0;
};

// Delta-y_t on [1, t, y_{t-1}, dy_{t-1..k}]; rows start at t = k+1 of the
// differenced sample, or at `trim` when a common sample is forced.
AdfFit adf_regression(const Eigen::VectorXd& y, int k, int trim, Quarter start) {
  const Eigen::Index T = y.size();
  Eigen::VectorXd dy(T - 1);
  for (Eigen::Index t = 1; t < T; ++t) dy[t - 1] = y[t] - y[t - 1];
  const int first = std::max(k, trim);  // index into dy
  const Eigen::Index n = dy.size() - first;
  if (n < 10) throw DataError("adf_test: insufficient sample after lag trimming");

  std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
  cols.emplace_back("const", Eigen::VectorXd::Ones(n));
  Eigen::VectorXd trend(n), ylag(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    trend[r] = static_cast<double>(first + r + 1);
    ylag[r] = y[first + r];  // y_{t-1} for dy index first+r
  }
  cols.emplace_back("trend", trend);
  cols.emplace_back("y(-1)", ylag);
  for (int lag = 1; lag <= k; ++lag) {
    Eigen::VectorXd dl(n);
    for (Eigen::Index r = 0; r < n; ++r) dl[r] = dy[first + r - lag];
    cols.emplace_back("dy(-" + std::to_string(lag) + ")", dl);
  }
  Eigen::VectorXd lhs = dy.tail(n);
  AdfFit out;
  out.fit = ols_fit(lhs, concat_columns(cols, start.plus(first + 1)));
  out.t_rho = out.fit.t_stats[2];
  return out;
}

}  // namespace

bool CriticalValueTable::reject(double stat, double level) const {
  auto it = cv.find(level);
  if (it == cv.end()) throw ConfigError("no critical value at requested level");
  return reject_below ? stat < it->second : stat > it->second;
}

const CriticalValueTable& adf_trend_critical_values() {
  static const CriticalValueTable t{UnitRootTest::Adf, true,
                                    {{0.10, -3.12}, {0.05, -3.41}, {0.01, -3.96}}};
  return t;
}

const CriticalValueTable& kpss_trend_critical_values() {
  static const CriticalValueTable t{UnitRootTest::Kpss, false,
                                    {{0.10, 0.119}, {0.05, 0.146}, {0.01, 0.216}}};
  return t;
}

const CriticalValueTable& ers_trend_critical_values() {
  static const CriticalValueTable t{UnitRootTest::Ers, true,
                                    {{0.10, 6.845}, {0.05, 5.656}, {0.01, 4.094}}};
  return t;
}

bool UnitRootReport::unit_root_indicated(double level) const {
  auto it = decision_at.find(level);
  if (it == decision_at.end()) throw ConfigError("report has no decision at requested level");
  const bool reject = it->second;
  // ADF and ERS test the I(1) null, KPSS tests I(0).
  return test == UnitRootTest::Kpss ? reject : !reject;
}

UnitRootReport adf_test(const QuarterlySeries& s, int max_lags, LagSelection selection,
                        int fixed_lags) {
  const int T = static_cast<int>(s.size());
  if (max_lags < 0) throw ConfigError("adf_test: max_lags must be nonnegative");
  if (T < max_lags + 10) throw DataError("adf_test: series too short for requested lags");
  const Eigen::VectorXd y = s.vector();

  int chosen = fixed_lags;
  if (selection == LagSelection::Aic) {
    double best = std::numeric_limits<double>::infinity();
    chosen = 0;
    for (int k = 0; k <= max_lags; ++k) {
      // Common estimation sample across candidates.
      const AdfFit cand = adf_regression(y, k, max_lags, s.start());
      const double n = cand.fit.nobs;
      const double aic = std::log(cand.fit.rss / n) + 2.0 * cand.fit.nregressors / n;
      if (aic < best) {
        best = aic;
        chosen = k;
      }
    }
  } else if (fixed_lags > max_lags) {
    throw ConfigError("adf_test: fixed lag exceeds max_lags");
  }

  const AdfFit final_fit = adf_regression(y, chosen, chosen, s.start());
  UnitRootReport rep;
  rep.test = UnitRootTest::Adf;
  rep.statistic = final_fit.t_rho;
  rep.lags_used = chosen;
  rep.decision_at = decisions(adf_trend_critical_values(), rep.statistic);
  rep.p_value_interp = interp_p(kDfTrendQuantiles, rep.statistic, true);
  if (!rep.p_value_interp) {
    rep.p_value_interp = rep.statistic < kDfTrendQuantiles.front().second ? 0.001 : 0.999;
  }
  return rep;
}

UnitRootReport kpss_test(const QuarterlySeries& s, int bandwidth) {
  const int T = static_cast<int>(s.size());
  if (T < 20) throw DataError("kpss_test: series too short");
  const int l = bandwidth >= 0
                    ? bandwidth
                    : static_cast<int>(std::floor(4.0 * std::pow(T / 100.0, 2.0 / 9.0)));

  // Residuals from regression on intercept + trend.
  std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
  cols.emplace_back("const", Eigen::VectorXd::Ones(T));
  Eigen::VectorXd trend(T);
  for (int t = 0; t < T; ++t) trend[t] = t + 1.0;
  cols.emplace_back("trend", trend);
  const RegressionFit fit = ols_fit(s.vector(), concat_columns(cols, s.start()));
  const Eigen::VectorXd& e = fit.residuals;

  double cum = 0.0, sum_s2 = 0.0;
  for (int t = 0; t < T; ++t) {
    cum += e[t];
    sum_s2 += cum * cum;
  }
  // Bartlett-weighted long-run variance.
  double lrv = e.squaredNorm() / T;
  for (int j = 1; j <= l; ++j) {
    double gamma = 0.0;
    for (int t = j; t < T; ++t) gamma += e[t] * e[t - j];
    gamma /= T;
    lrv += 2.0 * (1.0 - static_cast<double>(j) / (l + 1.0)) * gamma;
  }
  if (lrv <= 0.0) throw NumericalError("kpss_test: nonpositive long-run variance");

  UnitRootReport rep;
  rep.test = UnitRootTest::Kpss;
  rep.statistic = sum_s2 / (static_cast<double>(T) * T * lrv);
  rep.lags_used = l;
  rep.decision_at = decisions(kpss_trend_critical_values(), rep.statistic);
  static const std::vector<std::pair<double, double>> grid = {
      {0.10, 0.119}, {0.05, 0.146}, {0.025, 0.176}, {0.01, 0.216}};
  rep.p_value_interp = interp_p(grid, rep.statistic, false);
  return rep;
}

UnitRootReport ers_test(const QuarterlySeries& s) {
  const int T = static_cast<int>(s.size());
  if (T < 20) throw DataError("ers_test: series too short");
  const Eigen::VectorXd y = s.vector();
  const double abar = 1.0 - 13.5 / T;

  // SSR of the GLS (quasi-differenced) regression on (1, t) at parameter a.
  auto gls_ssr = [&](double a) {
    Eigen::VectorXd ya(T);
    Eigen::MatrixXd za(T, 2);
    ya[0] = y[0];
    za(0, 0) = 1.0;
    za(0, 1) = 1.0;
    for (int t = 1; t < T; ++t) {
      ya[t] = y[t] - a * y[t - 1];
      za(t, 0) = 1.0 - a;
      za(t, 1) = (t + 1.0) - a * t;
    }
    const Eigen::VectorXd beta = (za.transpose() * za).ldlt().solve(za.transpose() * ya);
    return (ya - za * beta).squaredNorm();
  };
  const double s_abar = gls_ssr(abar);
  const double s_one = gls_ssr(1.0);

  // AR spectral long-run variance: ADF-type regression, lag order by BIC.
  const int kmax = static_cast<int>(std::floor(4.0 * std::pow(T / 100.0, 0.25)));
  double best_bic = std::numeric_limits<double>::infinity();
  double omega2 = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    Eigen::VectorXd dy(T - 1);
    for (int t = 1; t < T; ++t) dy[t - 1] = y[t] - y[t - 1];
    const int first = kmax;
    const Eigen::Index n = dy.size() - first;
    if (n < 10) break;
    std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
    cols.emplace_back("const", Eigen::VectorXd::Ones(n));
    Eigen::VectorXd tr(n), ylag(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      tr[r] = static_cast<double>(first + r + 1);
      ylag[r] = y[first + r];
    }
    cols.emplace_back("trend", tr);
    cols.emplace_back("y(-1)", ylag);
    for (int lag = 1; lag <= k; ++lag) {
      Eigen::VectorXd dl(n);
      for (Eigen::Index r = 0; r < n; ++r) dl[r] = dy[first + r - lag];
      cols.emplace_back("dy(-" + std::to_string(lag) + ")", dl);
    }
    const RegressionFit fit = ols_fit(dy.tail(n), concat_columns(cols, s.start()));
    const double bic = std::log(fit.rss / n) + fit.nregressors * std::log(double(n)) / n;
    if (bic < best_bic) {
      best_bic = bic;
      double gamma_sum = 0.0;
      for (int lag = 1; lag <= k; ++lag) gamma_sum += fit.coefficients[3 + lag - 1];
      const double sigma2 = fit.rss / (fit.nobs - fit.nregressors);
      const double denom = 1.0 - gamma_sum;
      omega2 = sigma2 / (denom * denom);
    }
  }
  if (omega2 <= 0.0) throw NumericalError("ers_test: nonpositive spectral variance estimate");

  UnitRootReport rep;
  rep.test = UnitRootTest::Ers;
  rep.statistic = (s_abar - abar * s_one) / omega2;
  rep.lags_used = 0;
  rep.decision_at = decisions(ers_trend_critical_values(), rep.statistic);
  static const std::vector<std::pair<double, double>> grid = {
      {0.10, 6.845}, {0.05, 5.656}, {0.01, 4.094}};
  rep.p_value_interp = interp_p(grid, rep.statistic, true);
  return rep;
}

Integration classify_from_reports(const UnitRootReport& adf_level, const UnitRootReport& kpss_level,
                                  const UnitRootReport& ers_level, const UnitRootReport& adf_diff,
                                  const UnitRootReport& kpss_diff, const UnitRootReport& ers_diff,
                                  double level) {
  const int level_ur = static_cast<int>(adf_level.unit_root_indicated(level)) +
                       static_cast<int>(kpss_level.unit_root_indicated(level)) +
                       static_cast<int>(ers_level.unit_root_indicated(level));
  const int diff_stat = static_cast<int>(!adf_diff.unit_root_indicated(level)) +
                        static_cast<int>(!kpss_diff.unit_root_indicated(level)) +
                        static_cast<int>(!ers_diff.unit_root_indicated(level));
  if (level_ur <= 1) return Integration::I0;  // majority says the level is stationary
  if (level_ur >= 2 && diff_stat >= 2) return Integration::I1;
  return Integration::Inconclusive;
}

Integration classify_integration(const QuarterlySeries& s) {
  const int T = static_cast<int>(s.size());
  const int max_lags = static_cast<int>(std::floor(12.0 * std::pow(T / 100.0, 0.25)));
  const QuarterlySeries d = transform_diff(s, 1);
  return classify_from_reports(adf_test(s, max_lags, LagSelection::Aic), kpss_test(s), ers_test(s),
                               adf_test(d, max_lags, LagSelection::Aic), kpss_test(d),
                               ers_test(d));
}

}  // namespace fiscal
