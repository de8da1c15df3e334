#include "fiscal/bp.hpp"

#include <cmath>

#include "fiscal/errors.hpp"
#include "fiscal/ols.hpp"

namespace fiscal {

namespace {

void check_aligned(const QuarterlySeries& a, const QuarterlySeries& b) {
  if (!(a.start() == b.start()) || a.size() != b.size())
    throw DataError("structural identification: residual series '" + a.name() + "' and '" +
                    b.name() + "' are not aligned");
}

double variance(const Eigen::VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().sum() / v.size();
}

}  // namespace

std::pair<QuarterlySeries, QuarterlySeries> cyclically_adjust(const QuarterlySeries& u_r,
                                                              const QuarterlySeries& u_g,
                                                              const QuarterlySeries& u_y,
                                                              const BpRestrictions& r) {
  check_aligned(u_r, u_y);
  check_aligned(u_g, u_y);
  std::vector<double> t_ca(u_r.size()), g_ca(u_g.size());
  for (std::size_t t = 0; t < u_r.size(); ++t) {
    t_ca[t] = u_r[t] - r.a1 * u_y[t];
    g_ca[t] = u_g[t] - r.b1 * u_y[t];
  }
  return {QuarterlySeries(u_r.start(), std::move(t_ca), "t_ca"),
          QuarterlySeries(u_g.start(), std::move(g_ca), "g_ca")};
}

StructuralShocks identify_structural(const QuarterlySeries& u_r, const QuarterlySeries& u_g,
                                     const QuarterlySeries& u_y, const BpRestrictions& r) {
  check_aligned(u_r, u_y);
  check_aligned(u_g, u_y);
  const int T = static_cast<int>(u_r.size());
  if (T < 30) throw DataError("structural identification: sample too short (T < 30)");

  auto [t_ca, g_ca] = cyclically_adjust(u_r, u_g, u_y, r);
  const double scale = variance(u_r.vector()) + variance(u_g.vector()) + variance(u_y.vector());

  // With a2 = 0 the cyclically adjusted revenue residual is the tax shock.
  Eigen::VectorXd eps_t = t_ca.vector();
  eps_t.array() -= eps_t.mean();
  if (variance(eps_t) <= 1e-16 * std::max(scale, 1e-30))
    throw NumericalError("structural identification: degenerate variance in eps_T");

  auto one_col = [&](const Eigen::VectorXd& v, const std::string& name) {
    LagMatrix X;
    X.sample_start = u_r.start();
    X.data.resize(v.size(), 2);
    X.data.col(0).setOnes();
    X.data.col(1) = v;
    X.columns = {"const", name};
    return X;
  };

  // b2 from u_g on eps_T; the residual is the spending shock.
  const RegressionFit fit_g = ols_fit(u_g.vector(), one_col(eps_t, "eps_T"));
  Eigen::VectorXd eps_g = fit_g.residuals;
  if (variance(eps_g) <= 1e-16 * std::max(scale, 1e-30))
    throw NumericalError("structural identification: degenerate variance in eps_G");

  // c1, c2 from u_y on both shocks; the residual is the output shock.
  LagMatrix X2;
  X2.sample_start = u_r.start();
  X2.data.resize(T, 3);
  X2.data.col(0).setOnes();
  X2.data.col(1) = eps_t;
  X2.data.col(2) = eps_g;
  X2.columns = {"const", "eps_T", "eps_G"};
  const RegressionFit fit_y = ols_fit(u_y.vector(), X2);

  auto to_series = [&](const Eigen::VectorXd& v, const std::string& name) {
    std::vector<double> vals(v.data(), v.data() + v.size());
    return QuarterlySeries(u_r.start(), std::move(vals), name);
  };

  StructuralShocks out{to_series(eps_t, "eps_T"), to_series(eps_g, "eps_G"),
                       to_series(fit_y.residuals, "eps_GNP")};
  out.b2 = fit_g.coefficients[1];
  out.b2_se = fit_g.standard_errors[1];
  out.c1 = fit_y.coefficients[1];
  out.c1_se = fit_y.standard_errors[1];
  out.c2 = fit_y.coefficients[2];
  out.c2_se = fit_y.standard_errors[2];
  return out;
}

}  // namespace fiscal
