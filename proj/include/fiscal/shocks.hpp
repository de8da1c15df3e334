#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fiscal/ols.hpp"
#include "fiscal/series.hpp"

namespace fiscal {

// positive[t] = (|s|+s)/2, negative[t] = -(|s|-s)/2; they sum back to the
// input and have elementwise product zero.
std::pair<QuarterlySeries, QuarterlySeries> cover_split(const QuarterlySeries& shock);

struct ShockBundle {
  QuarterlySeries sgp, sgn, srp, srn;
  std::string source;  // vecm-mzm | vecm-divisia | svr

  // Build from a spending shock and a revenue shock on a common sample.
  static ShockBundle from_shocks(const QuarterlySeries& spending, const QuarterlySeries& revenue,
                                 std::string source);
};

enum class AsymmetrySpec { Contemporaneous, FourLag };

struct BatteryRow {
  std::string hypothesis;
  double f_stat = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p_value = 1.0;
};

struct AsymmetryResult {
  RegressionFit fit;
  AsymmetrySpec spec = AsymmetrySpec::Contemporaneous;
  std::vector<BatteryRow> battery;
};

// Contemporaneous: dep on intercept, 2 own lags, d(tb3), d(m) and the four
// current shocks. FourLag: 4 own lags and lags 0..4 of d(tb3), d(m) and each
// shock. tb3 and m enter as levels and are differenced internally.
AsymmetryResult asymmetry_regression(const QuarterlySeries& dep, const QuarterlySeries& tb3,
                                     const QuarterlySeries& m, const ShockBundle& shocks,
                                     AsymmetrySpec spec, const SeKind& se = SeKind::plain());

struct RestrictionTest {
  double f_stat = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p_value = 1.0;
};

// Wald F test of R*beta = q on a fitted regression.
RestrictionTest linear_restriction_test(const RegressionFit& fit, const Eigen::MatrixXd& R,
                                        const Eigen::VectorXd& q);

// The asymmetry F-test battery for the given specification; appends to (and
// returns) result.battery.
std::vector<BatteryRow> hypothesis_battery(AsymmetryResult& result);

}  // namespace fiscal
