#include "fiscal/shocks.hpp"

#include <cmath>

#include "fiscal/dist.hpp"
#include "fiscal/errors.hpp"

namespace fiscal {

std::pair<QuarterlySeries, QuarterlySeries> cover_split(const QuarterlySeries& shock) {
  std::vector<double> pos(shock.size()), neg(shock.size());
  for (std::size_t t = 0; t < shock.size(); ++t) {
    const double s = shock[t];
    pos[t] = 0.5 * (std::fabs(s) + s);
    neg[t] = -0.5 * (std::fabs(s) - s);
  }
  return {QuarterlySeries(shock.start(), std::move(pos), shock.name() + "_pos"),
          QuarterlySeries(shock.start(), std::move(neg), shock.name() + "_neg")};
}

ShockBundle ShockBundle::from_shocks(const QuarterlySeries& spending,
                                     const QuarterlySeries& revenue, std::string source) {
  auto aligned = align({spending, revenue});
  auto [sgp, sgn] = cover_split(aligned[0]);
  auto [srp, srn] = cover_split(aligned[1]);
  return ShockBundle{sgp.renamed("SGP"), sgn.renamed("SGN"), srp.renamed("SRP"),
                     srn.renamed("SRN"), std::move(source)};
}

AsymmetryResult asymmetry_regression(const QuarterlySeries& dep, const QuarterlySeries& tb3,
                                     const QuarterlySeries& m, const ShockBundle& shocks,
                                     AsymmetrySpec spec, const SeKind& se) {
  const QuarterlySeries dtb3 = transform_diff(tb3, 1).renamed("d(TB3)");
  const QuarterlySeries dm = transform_diff(m, 1).renamed("d(MZM)");

  std::vector<QuarterlySeries> series = {dep,          dtb3,        dm,
                                         shocks.sgp,   shocks.sgn,  shocks.srp,
                                         shocks.srn};
  series = align(series);

  const int own_lags = spec == AsymmetrySpec::Contemporaneous ? 2 : 4;
  const int ctrl_lags = spec == AsymmetrySpec::Contemporaneous ? 0 : 4;
  std::vector<int> lags = {own_lags, ctrl_lags, ctrl_lags, ctrl_lags,
                           ctrl_lags, ctrl_lags, ctrl_lags};
  std::vector<bool> current = {false, true, true, true, true, true, true};
  LagMatrix X = build_lag_matrix(series, lags, current);

  LagMatrix Xi;
  Xi.sample_start = X.sample_start;
  Xi.data.resize(X.rows(), X.cols() + 1);
  Xi.data.col(0).setOnes();
  Xi.data.rightCols(X.cols()) = X.data;
  Xi.columns.push_back("const");
  Xi.columns.insert(Xi.columns.end(), X.columns.begin(), X.columns.end());

  const QuarterlySeries dep_sample = series[0].slice(Xi.sample_start, series[0].end());

  AsymmetryResult out;
  out.spec = spec;
  out.fit = ols_fit(dep_sample.vector(), Xi, se);
  return out;
}

RestrictionTest linear_restriction_test(const RegressionFit& fit, const Eigen::MatrixXd& R,
                                        const Eigen::VectorXd& q) {
  const Eigen::Index r = R.rows();
  if (R.cols() != fit.coefficients.size())
    throw ConfigError("restriction test: R column count does not match coefficients");
  if (q.size() != r) throw ConfigError("restriction test: q length does not match R rows");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(R.transpose());
  if (qr.rank() < r) throw ConfigError("restriction test: R is rank deficient");

  const Eigen::VectorXd d = R * fit.coefficients - q;
  const Eigen::MatrixXd V = R * fit.coef_covariance * R.transpose();
  const Eigen::VectorXd w = V.ldlt().solve(d);
  RestrictionTest out;
  out.df1 = static_cast<int>(r);
  out.df2 = fit.nobs - fit.nregressors;
  out.f_stat = std::max(0.0, d.dot(w) / static_cast<double>(r));
  out.p_value = tail_prob(DistSpec::fisher_f(out.df1, out.df2), out.f_stat, Tails::One);
  return out;
}

namespace {

// Restriction rows built from (coefficient name, weight) pairs.
BatteryRow named_test(const RegressionFit& fit, const std::string& id,
                      const std::vector<std::vector<std::pair<std::string, double>>>& rows) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            fit.coefficients.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [name, w] : rows[i]) {
      const int j = fit.index_of(name);
      if (j < 0) throw ConfigError("battery: fit has no coefficient '" + name + "'");
      R(static_cast<Eigen::Index>(i), j) += w;
    }
  }
  const RestrictionTest t =
      linear_restriction_test(fit, R, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size())));
  return BatteryRow{id, t.f_stat, t.df1, t.df2, t.p_value};
}

}  // namespace

std::vector<BatteryRow> hypothesis_battery(AsymmetryResult& result) {
  const RegressionFit& fit = result.fit;
  std::vector<BatteryRow> rows;
  if (result.spec == AsymmetrySpec::Contemporaneous) {
    rows.push_back(named_test(fit, "SGP=SGN", {{{"SGP", 1.0}, {"SGN", -1.0}}}));
    rows.push_back(named_test(fit, "SRP=SRN", {{{"SRP", 1.0}, {"SRN", -1.0}}}));
    rows.push_back(named_test(fit, "SGP=SRN", {{{"SGP", 1.0}, {"SRN", -1.0}}}));
    rows.push_back(named_test(fit, "SGP=-SRN", {{{"SGP", 1.0}, {"SRN", 1.0}}}));
    rows.push_back(named_test(fit, "SGN=SRP", {{{"SGN", 1.0}, {"SRP", -1.0}}}));
    rows.push_back(named_test(fit, "SGN=-SRP", {{{"SGN", 1.0}, {"SRP", 1.0}}}));
  } else {
    rows.push_back(named_test(fit, "SGP=SGN", {{{"SGP", 1.0}, {"SGN", -1.0}}}));
    rows.push_back(named_test(fit, "SRP=SRN", {{{"SRP", 1.0}, {"SRN", -1.0}}}));
    rows.push_back(named_test(fit, "SGP=-SRN", {{{"SGP", 1.0}, {"SRN", 1.0}}}));
    rows.push_back(named_test(fit, "SGN=-SRP", {{{"SGN", 1.0}, {"SRP", 1.0}}}));
    for (const std::string name : {"SGP", "SGN", "SRP", "SRN"}) {
      std::vector<std::vector<std::pair<std::string, double>>> joint;
      joint.push_back({{name, 1.0}});
      for (int lag = 1; lag <= 4; ++lag)
        joint.push_back({{name + "(-" + std::to_string(lag) + ")", 1.0}});
      rows.push_back(named_test(fit, name + " jointly 0", joint));
    }
    auto cum = [&](const std::string& a, const std::string& b) {
      std::vector<std::pair<std::string, double>> row = {{a, 1.0}, {b, -1.0}};
      for (int lag = 1; lag <= 4; ++lag) {
        row.emplace_back(a + "(-" + std::to_string(lag) + ")", 1.0);
        row.emplace_back(b + "(-" + std::to_string(lag) + ")", -1.0);
      }
      return named_test(fit, "sum " + a + "=sum " + b, {row});
    };
    rows.push_back(cum("SGP", "SGN"));
    rows.push_back(cum("SRP", "SRN"));
  }
  result.battery = rows;
  return rows;
}

}  // namespace fiscal
