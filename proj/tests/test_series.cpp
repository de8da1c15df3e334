#include <doctest.h>

#include <cmath>
#include <random>

#include "fiscal/errors.hpp"
#include "fiscal/series.hpp"

#include "oracles.hpp"

using namespace fiscal;

TEST_CASE("quarter arithmetic and parsing") {
  Quarter q{1967, 1};
  CHECK(q.str() == "1967Q1");
  CHECK(q.plus(4).str() == "1968Q1");
  CHECK(q.plus(3).str() == "1967Q4");
  CHECK(Quarter::parse("2011Q3") == Quarter{2011, 3});
  CHECK(Quarter::parse("2011Q3").plus(2).str() == "2012Q1");
  CHECK_THROWS_AS(Quarter::parse("2011Q5"), DataError);
  CHECK_THROWS_AS(Quarter::parse("2011-03"), DataError);
}

TEST_CASE("series construction validates values") {
  CHECK_THROWS_AS(QuarterlySeries({1967, 1}, {}, "x"), DataError);
  CHECK_THROWS_AS(QuarterlySeries({1967, 1}, {1.0, std::nan("")}, "x"), DataError);
  QuarterlySeries s({1967, 1}, {1.0, 2.0, 3.0}, "x");
  CHECK(s.end().str() == "1967Q3");
  CHECK(s.date_at(2).str() == "1967Q3");
}

TEST_CASE("deflate rescales by base-year annual average") {
  // deflator averages to 2 over 1968; real = nominal / (deflator/2)
  std::vector<double> nom(8, 10.0);
  std::vector<double> defl = {1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0};
  QuarterlySeries n({1967, 1}, nom, "n");
  QuarterlySeries d({1967, 1}, defl, "d");
  auto real = deflate(n, d, 1968);
  CHECK(real[0] == doctest::Approx(20.0));   // deflator 1.0 -> rescaled 0.5
  CHECK(real[4] == doctest::Approx(10.0));   // base year quarters stay put
  CHECK_THROWS_AS(deflate(n, d, 1990), DataError);  // base year outside sample
}

TEST_CASE("log and diff transforms") {
  QuarterlySeries s({1967, 1}, {1.0, std::exp(1.0), std::exp(2.0)}, "x");
  auto l = transform_log(s);
  CHECK(l[1] == doctest::Approx(1.0));
  auto d = transform_diff(l, 1);
  CHECK(d.start().str() == "1967Q2");
  CHECK(d.size() == 2);
  CHECK(d[0] == doctest::Approx(1.0));
  QuarterlySeries neg({1967, 1}, {1.0, -2.0}, "x");
  CHECK_THROWS_AS(transform_log(neg), DataError);
}

TEST_CASE("align to maximal common range") {
  QuarterlySeries a({1967, 1}, {1, 2, 3, 4, 5, 6}, "a");
  QuarterlySeries b({1967, 3}, {1, 2, 3, 4, 5, 6}, "b");
  auto v = align({a, b});
  CHECK(v[0].start().str() == "1967Q3");
  CHECK(v[0].end().str() == "1968Q2");
  CHECK(v[0].size() == 4);
  CHECK(v[1].size() == 4);
  CHECK(v[0][0] == doctest::Approx(3.0));
  QuarterlySeries c({1980, 1}, {1.0, 2.0}, "c");
  CHECK_THROWS_AS(align({a, c}), DataError);  // disjoint ranges
}

TEST_CASE("lag matrix stacking and naming") {
  QuarterlySeries a({1967, 1}, {1, 2, 3, 4, 5}, "a");
  QuarterlySeries b({1967, 1}, {10, 20, 30, 40, 50}, "b");
  auto L = build_lag_matrix({a, b}, {2, 0}, {false, true});
  CHECK(L.rows() == 3);
  CHECK(L.cols() == 3);
  CHECK(L.sample_start.str() == "1967Q3");
  REQUIRE(L.columns.size() == 3);
  CHECK(L.columns[0] == "a(-1)");
  CHECK(L.columns[1] == "a(-2)");
  CHECK(L.columns[2] == "b");
  CHECK(L.data(0, 0) == doctest::Approx(2.0));  // a at 1967Q2
  CHECK(L.data(0, 1) == doctest::Approx(1.0));
  CHECK(L.data(0, 2) == doctest::Approx(30.0));
}

TEST_CASE("hp filter identity, linearity and dense-oracle match") {
  std::mt19937_64 rng(11);
  const int T = 180;
  Eigen::VectorXd y = oracle::randn(rng, T);
  for (int t = 1; t < T; ++t) y[t] += y[t - 1] + 0.05;  // RW with drift
  QuarterlySeries s({1967, 1}, std::vector<double>(y.data(), y.data() + T), "y");

  auto [trend, cycle] = hp_filter(s, 1600.0);
  for (int t = 0; t < T; ++t) {
    CHECK(trend[t] + cycle[t] == doctest::Approx(s[t]).epsilon(1e-10));
  }

  const Eigen::VectorXd tau = oracle::hp_trend_dense(y, 1600.0);
  double worst = 0.0;
  for (int t = 0; t < T; ++t) worst = std::max(worst, std::fabs(trend[t] - tau[t]));
  CHECK(worst < 1e-8);

  // a linear series is its own trend
  std::vector<double> lin(T);
  for (int t = 0; t < T; ++t) lin[t] = 0.3 + 0.01 * t;
  auto [lt, lc] = hp_filter(QuarterlySeries({1967, 1}, lin, "lin"), 1600.0);
  for (int t = 0; t < T; ++t) CHECK(std::fabs(lc[t]) < 1e-8);
}
