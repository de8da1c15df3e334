#include <doctest.h>

#include <cmath>
#include <random>

#include "fiscal/unit_root.hpp"

#include "oracles.hpp"

using namespace fiscal;

namespace {

QuarterlySeries random_walk(std::mt19937_64& rng, int T, double drift = 0.0) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(T);
  double x = 0.0;
  for (int t = 0; t < T; ++t) {
    x += drift + d(rng);
    v[t] = x;
  }
  return {{1967, 1}, v, "rw"};
}

QuarterlySeries trend_stationary(std::mt19937_64& rng, int T, double rho = 0.5) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(T);
  double x = 0.0;
  for (int t = 0; t < T; ++t) {
    x = rho * x + d(rng);
    v[t] = 0.5 + 0.05 * t + x;
  }
  return {{1967, 1}, v, "ts"};
}

}  // namespace

TEST_CASE("critical value tables carry the documented entries") {
  const auto& kpss = kpss_trend_critical_values();
  CHECK(kpss.cv.at(0.10) == doctest::Approx(0.119));
  CHECK(kpss.cv.at(0.05) == doctest::Approx(0.146));
  CHECK(kpss.cv.at(0.01) == doctest::Approx(0.216));
  CHECK_FALSE(kpss.reject_below);

  const auto& ers = ers_trend_critical_values();
  CHECK(ers.cv.at(0.10) == doctest::Approx(6.845));
  CHECK(ers.cv.at(0.05) == doctest::Approx(5.656));
  CHECK(ers.cv.at(0.01) == doctest::Approx(4.094));
  CHECK(ers.reject_below);

  const auto& adf = adf_trend_critical_values();
  CHECK(adf.cv.at(0.05) == doctest::Approx(-3.41));
  CHECK(adf.reject_below);
  CHECK(adf.reject(-4.2, 0.05));
  CHECK_FALSE(adf.reject(-2.0, 0.05));
}

TEST_CASE("adf distinguishes a random walk from a stationary AR") {
  std::mt19937_64 rng(42);
  auto rw = random_walk(rng, 200);
  auto rep_rw = adf_test(rw, 8, LagSelection::Aic);
  CHECK_FALSE(rep_rw.decision_at.at(0.05));
  CHECK(rep_rw.unit_root_indicated());
  CHECK(rep_rw.p_value_interp.has_value());
  CHECK(*rep_rw.p_value_interp > 0.05);

  auto ts = trend_stationary(rng, 200);
  auto rep_ts = adf_test(ts, 8, LagSelection::Aic);
  CHECK(rep_ts.decision_at.at(0.05));
  CHECK_FALSE(rep_ts.unit_root_indicated());
  CHECK(*rep_ts.p_value_interp < 0.05);
}

TEST_CASE("adf fixed-lag selection is honoured") {
  std::mt19937_64 rng(3);
  auto rw = random_walk(rng, 150);
  auto rep = adf_test(rw, 8, LagSelection::Fixed, 3);
  CHECK(rep.lags_used == 3);
  auto rep_aic = adf_test(rw, 8, LagSelection::Aic);
  CHECK(rep_aic.lags_used >= 0);
  CHECK(rep_aic.lags_used <= 8);
}

TEST_CASE("kpss direction is opposite to adf") {
  std::mt19937_64 rng(5);
  auto rw = random_walk(rng, 200, 0.1);
  auto rep_rw = kpss_test(rw);
  CHECK(rep_rw.decision_at.at(0.05));  // rejects stationarity
  CHECK(rep_rw.unit_root_indicated());

  auto ts = trend_stationary(rng, 200);
  auto rep_ts = kpss_test(ts);
  CHECK_FALSE(rep_ts.decision_at.at(0.05));
  CHECK_FALSE(rep_ts.unit_root_indicated());
}

TEST_CASE("kpss automatic bandwidth follows the newey-west rule") {
  std::mt19937_64 rng(6);
  auto s = trend_stationary(rng, 180);
  auto a = kpss_test(s);
  const int expect = static_cast<int>(std::floor(4.0 * std::pow(180.0 / 100.0, 2.0 / 9.0)));
  CHECK(a.lags_used == expect);
  auto b = kpss_test(s, 8);
  CHECK(b.lags_used == 8);
  CHECK(a.statistic != doctest::Approx(b.statistic));
}

TEST_CASE("ers point-optimal statistic direction") {
  std::mt19937_64 rng(9);
  auto rw = random_walk(rng, 200);
  auto rep_rw = ers_test(rw);
  CHECK_FALSE(rep_rw.decision_at.at(0.05));
  CHECK(rep_rw.unit_root_indicated());

  auto ts = trend_stationary(rng, 200, 0.3);
  auto rep_ts = ers_test(ts);
  CHECK(rep_ts.decision_at.at(0.05));
}

TEST_CASE("majority classification") {
  std::mt19937_64 rng(12);
  auto rw = random_walk(rng, 240, 0.05);
  CHECK(classify_integration(rw) == Integration::I1);
  auto ts = trend_stationary(rng, 240, 0.2);
  CHECK(classify_integration(ts) == Integration::I0);
}

TEST_CASE("classification from prebuilt reports follows the 2-of-3 rule") {
  auto mk = [](UnitRootTest t, bool reject) {
    UnitRootReport r;
    r.test = t;
    r.decision_at = {{0.10, reject}, {0.05, reject}, {0.01, reject}};
    return r;
  };
  // level looks I(1) on all three, difference looks stationary on all three
  auto i1 = classify_from_reports(mk(UnitRootTest::Adf, false), mk(UnitRootTest::Kpss, true),
                                  mk(UnitRootTest::Ers, false), mk(UnitRootTest::Adf, true),
                                  mk(UnitRootTest::Kpss, false), mk(UnitRootTest::Ers, true));
  CHECK(i1 == Integration::I1);
  // level stationary by all three
  auto i0 = classify_from_reports(mk(UnitRootTest::Adf, true), mk(UnitRootTest::Kpss, false),
                                  mk(UnitRootTest::Ers, true), mk(UnitRootTest::Adf, true),
                                  mk(UnitRootTest::Kpss, false), mk(UnitRootTest::Ers, true));
  CHECK(i0 == Integration::I0);
  // level I(1)-ish but the difference still looks nonstationary -> inconclusive
  auto inc = classify_from_reports(mk(UnitRootTest::Adf, false), mk(UnitRootTest::Kpss, true),
                                   mk(UnitRootTest::Ers, false), mk(UnitRootTest::Adf, false),
                                   mk(UnitRootTest::Kpss, true), mk(UnitRootTest::Ers, false));
  CHECK(inc == Integration::Inconclusive);
}
