#include <doctest.h>

#include <random>

#include "fiscal/errors.hpp"
#include "fiscal/ols.hpp"

#include "oracles.hpp"

using namespace fiscal;

namespace {

LagMatrix make_lagmat(const Eigen::MatrixXd& X, std::vector<std::string> names) {
  LagMatrix L;
  L.data = X;
  L.columns = std::move(names);
  L.sample_start = Quarter{1967, 1};
  return L;
}

}  // namespace

TEST_CASE("ols matches normal-equations oracle on 100 seeded problems") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 40 + static_cast<int>(rng() % 80);
    const int k = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd X(n, k);
    X.col(0).setOnes();
    for (int j = 1; j < k; ++j) X.col(j) = oracle::randn(rng, n);
    const Eigen::VectorXd beta = oracle::randn(rng, k);
    const Eigen::VectorXd y = X * beta + 0.3 * oracle::randn(rng, n);

    std::vector<std::string> names;
    for (int j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
    auto fit = ols_fit(y, make_lagmat(X, names));
    const Eigen::VectorXd b_ref = oracle::ols_normal_equations(X, y);
    CHECK((fit.coefficients - b_ref).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(fit.rss == doctest::Approx((y - X * b_ref).squaredNorm()).epsilon(1e-10));
    CHECK(fit.nobs == n);
    CHECK(fit.nregressors == k);
  }
}

TEST_CASE("standard errors, t stats and p values") {
  // exact textbook check on a tiny regression
  Eigen::MatrixXd X(5, 2);
  X << 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  Eigen::VectorXd y(5);
  y << 2.1, 3.9, 6.2, 7.8, 10.1;
  auto fit = ols_fit(y, make_lagmat(X, {"const", "x"}));
  CHECK(fit.coef("x") == doctest::Approx(2.0).epsilon(1e-10));
  const double s2 = fit.rss / (5 - 2);
  const Eigen::MatrixXd V = s2 * (X.transpose() * X).inverse();
  CHECK(fit.standard_errors[1] == doctest::Approx(std::sqrt(V(1, 1))).epsilon(1e-10));
  CHECK(fit.t_stats[1] == doctest::Approx(fit.coef("x") / std::sqrt(V(1, 1))).epsilon(1e-10));
  CHECK(fit.p_values[1] < 1e-4);
  CHECK(fit.index_of("missing") == -1);
}

TEST_CASE("collinear design raises a numerical error naming a column") {
  Eigen::MatrixXd X(30, 3);
  X.col(0).setOnes();
  for (int i = 0; i < 30; ++i) X(i, 1) = i;
  X.col(2) = 2.0 * X.col(1);
  Eigen::VectorXd y = X.col(1);
  CHECK_THROWS_AS(ols_fit(y, make_lagmat(X, {"const", "a", "twice_a"})), NumericalError);
  try {
    ols_fit(y, make_lagmat(X, {"const", "a", "twice_a"}));
  } catch (const NumericalError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a") != std::string::npos);
  }
}

TEST_CASE("newey-west covariance reduces to white form at bandwidth 0") {
  std::mt19937_64 rng(7);
  const int n = 120;
  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  X.col(1) = oracle::randn(rng, n);
  const Eigen::VectorXd y = 1.0 + 0.5 * X.col(1).array() + 0.2 * oracle::randn(rng, n).array();

  auto nw0 = ols_fit(y, make_lagmat(X, {"const", "x"}), SeKind::nw(0));
  auto nw4 = ols_fit(y, make_lagmat(X, {"const", "x"}), SeKind::nw(4));
  auto plain = ols_fit(y, make_lagmat(X, {"const", "x"}));
  // same point estimates under any covariance choice
  CHECK((nw4.coefficients - plain.coefficients).lpNorm<Eigen::Infinity>() < 1e-12);
  // bandwidth-0 HAC equals the heteroskedasticity-only sandwich
  const Eigen::VectorXd u = y - X * plain.coefficients;
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(2, 2);
  for (int t = 0; t < n; ++t) meat += u[t] * u[t] * X.row(t).transpose() * X.row(t);
  const Eigen::MatrixXd bread = (X.transpose() * X).inverse();
  const Eigen::MatrixXd V = bread * meat * bread;
  CHECK((nw0.coef_covariance - V).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(nw4.standard_errors[1] > 0.0);
}

TEST_CASE("residual series carries the regression sample start") {
  Eigen::MatrixXd X(4, 1);
  X.setOnes();
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  auto fit = ols_fit(y, make_lagmat(X, {"const"}));
  auto r = fit.residual_series("u");
  CHECK(r.start().str() == "1967Q1");
  CHECK(r.size() == 4);
  CHECK(r[0] == doctest::Approx(-1.5));
}
