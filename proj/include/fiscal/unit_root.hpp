#pragma once

#include <map>
#include <optional>
#include <string>

#include "fiscal/series.hpp"

namespace fiscal {

enum class UnitRootTest { Adf, Kpss, Ers };

enum class LagSelection { Fixed, Aic };

enum class Integration { I0, I1, Inconclusive };

// One test outcome; decision_at maps significance level to "reject the
// test's null". ADF/ERS null is I(1), KPSS null is I(0).
struct UnitRootReport {
  UnitRootTest test = UnitRootTest::Adf;
  double statistic = 0.0;
  int lags_used = 0;
  std::map<double, bool> decision_at;  // keys 0.10, 0.05, 0.01
  std::optional<double> p_value_interp;
  bool p_value_approximate = true;

  // True when this report points to a unit root at the given level.
  bool unit_root_indicated(double level = 0.05) const;
};

struct CriticalValueTable {
  UnitRootTest test;
  bool reject_below;             // true: reject when statistic < value
  std::map<double, double> cv;   // level -> critical value

  bool reject(double stat, double level) const;
};

const CriticalValueTable& adf_trend_critical_values();
const CriticalValueTable& kpss_trend_critical_values();
const CriticalValueTable& ers_trend_critical_values();

// Augmented Dickey-Fuller with intercept and trend.
UnitRootReport adf_test(const QuarterlySeries& s, int max_lags, LagSelection selection,
                        int fixed_lags = 0);

// KPSS level-stationarity test around intercept and trend; bandwidth < 0
// selects the Newey-West automatic choice floor(4*(T/100)^(2/9)).
UnitRootReport kpss_test(const QuarterlySeries& s, int bandwidth = -1);

// Elliott-Rothenberg-Stock point-optimal P_T test, trend case,
// local alternative abar = 1 - 13.5/T.
UnitRootReport ers_test(const QuarterlySeries& s);

Integration classify_integration(const QuarterlySeries& level);

// 2-of-3 majority rule over precomputed reports (level and first difference).
Integration classify_from_reports(const UnitRootReport& adf_level, const UnitRootReport& kpss_level,
                                  const UnitRootReport& ers_level, const UnitRootReport& adf_diff,
                                  const UnitRootReport& kpss_diff, const UnitRootReport& ers_diff,
                                  double level = 0.05);

}  // namespace fiscal
