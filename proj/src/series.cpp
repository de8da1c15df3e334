#include "fiscal/series.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "fiscal/errors.hpp"

namespace fiscal {

Quarter Quarter::from_index(int idx) {
  Quarter out;
  out.year = idx / 4;
  out.q = idx % 4 + 1;
  if (idx < 0 && idx % 4 != 0) {
    out.year -= 1;
    out.q = idx - out.year * 4 + 1;
  }
  return out;
}

std::string Quarter::str() const {
  return std::to_string(year) + "Q" + std::to_string(q);
}

Quarter Quarter::parse(const std::string& s) {
  auto pos = s.find_first_of("Qq");
  if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
    throw DataError("bad quarter string: " + s);
  Quarter out;
  try {
    out.year = std::stoi(s.substr(0, pos));
    out.q = std::stoi(s.substr(pos + 1));
  } catch (const std::exception&) {
    throw DataError("bad quarter string: " + s);
  }
  if (out.q < 1 || out.q > 4) throw DataError("quarter out of range: " + s);
  return out;
}

QuarterlySeries::QuarterlySeries(Quarter start, std::vector<double> values, std::string name)
    : start_(start), values_(std::move(values)), name_(std::move(name)) {
  if (values_.empty()) throw DataError("series '" + name_ + "' is empty");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t]))
      throw DataError("series '" + name_ + "' has non-finite value at " + date_at(t).str());
  }
}

QuarterlySeries QuarterlySeries::renamed(std::string name) const {
  return QuarterlySeries(start_, values_, std::move(name));
}

QuarterlySeries QuarterlySeries::slice(Quarter from, Quarter to) const {
  int lo = from.index() - start_.index();
  int hi = to.index() - start_.index();
  if (lo < 0 || hi >= static_cast<int>(values_.size()) || hi < lo)
    throw DataError("slice [" + from.str() + "," + to.str() + "] outside series '" + name_ + "'");
  std::vector<double> v(values_.begin() + lo, values_.begin() + hi + 1);
  return QuarterlySeries(from, std::move(v), name_);
}

Eigen::VectorXd QuarterlySeries::vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

QuarterlySeries deflate(const QuarterlySeries& nominal, const QuarterlySeries& deflator,
                        int base_year) {
  if (!(nominal.start() == deflator.start()) || nominal.size() != deflator.size())
    throw DataError("deflate: samples of '" + nominal.name() + "' and '" + deflator.name() +
                    "' do not match");
  for (std::size_t t = 0; t < deflator.size(); ++t) {
    if (deflator[t] <= 0.0)
      throw DataError("deflate: non-positive deflator at " + deflator.date_at(t).str());
  }
  // Rescale so the deflator's base-year annual average equals 1.
  double base_sum = 0.0;
  int base_n = 0;
  for (std::size_t t = 0; t < deflator.size(); ++t) {
    if (deflator.date_at(t).year == base_year) {
      base_sum += deflator[t];
      ++base_n;
    }
  }
  if (base_n == 0)
    throw DataError("deflate: base year " + std::to_string(base_year) + " not in sample of '" +
                    deflator.name() + "'");
  const double base = base_sum / base_n;
  std::vector<double> out(nominal.size());
  for (std::size_t t = 0; t < nominal.size(); ++t) out[t] = nominal[t] / (deflator[t] / base);
  return QuarterlySeries(nominal.start(), std::move(out), nominal.name());
}

QuarterlySeries transform_log(const QuarterlySeries& s) {
  std::vector<double> out(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] <= 0.0)
      throw DataError("log: non-positive value in '" + s.name() + "' at " + s.date_at(t).str());
    out[t] = std::log(s[t]);
  }
  return QuarterlySeries(s.start(), std::move(out), s.name());
}

QuarterlySeries transform_diff(const QuarterlySeries& s, int order) {
  if (order < 1) throw ConfigError("diff: order must be positive");
  if (static_cast<int>(s.size()) <= order)
    throw DataError("diff: series '" + s.name() + "' too short for order " + std::to_string(order));
  std::vector<double> v(s.values());
  for (int d = 0; d < order; ++d) {
    for (std::size_t t = v.size() - 1; t >= 1; --t) v[t] -= v[t - 1];
    v.erase(v.begin());
  }
  return QuarterlySeries(s.start().plus(order), std::move(v), s.name());
}

std::vector<QuarterlySeries> align(const std::vector<QuarterlySeries>& series_list) {
  if (series_list.empty()) throw DataError("align: empty series list");
  int lo = series_list.front().start().index();
  int hi = series_list.front().end().index();
  for (const auto& s : series_list) {
    lo = std::max(lo, s.start().index());
    hi = std::min(hi, s.end().index());
  }
  if (hi < lo) throw DataError("align: series have no common quarter range");
  std::vector<QuarterlySeries> out;
  out.reserve(series_list.size());
  for (const auto& s : series_list)
    out.push_back(s.slice(Quarter::from_index(lo), Quarter::from_index(hi)));
  return out;
}

LagMatrix build_lag_matrix(const std::vector<QuarterlySeries>& series_list,
                           const std::vector<int>& lags_per_series,
                           const std::vector<bool>& include_current) {
  if (series_list.empty()) throw DataError("build_lag_matrix: no series");
  if (series_list.size() != lags_per_series.size() ||
      series_list.size() != include_current.size())
    throw ConfigError("build_lag_matrix: argument lengths differ");
  const int T = static_cast<int>(series_list.front().size());
  int max_lag = 0;
  for (std::size_t i = 0; i < series_list.size(); ++i) {
    if (lags_per_series[i] < 0) throw ConfigError("build_lag_matrix: negative lag count");
    if (static_cast<int>(series_list[i].size()) != T ||
        !(series_list[i].start() == series_list.front().start()))
      throw DataError("build_lag_matrix: series not aligned");
    max_lag = std::max(max_lag, lags_per_series[i]);
  }
  const int rows = T - max_lag;
  if (rows < 1) throw DataError("build_lag_matrix: insufficient length after lag trimming");

  int ncols = 0;
  for (std::size_t i = 0; i < series_list.size(); ++i)
    ncols += lags_per_series[i] + (include_current[i] ? 1 : 0);

  LagMatrix out;
  out.data.resize(rows, ncols);
  out.sample_start = series_list.front().start().plus(max_lag);
  int c = 0;
  for (std::size_t i = 0; i < series_list.size(); ++i) {
    const auto& s = series_list[i];
    if (include_current[i]) {
      for (int r = 0; r < rows; ++r) out.data(r, c) = s[max_lag + r];
      out.columns.push_back(s.name());
      ++c;
    }
    for (int lag = 1; lag <= lags_per_series[i]; ++lag) {
      for (int r = 0; r < rows; ++r) out.data(r, c) = s[max_lag + r - lag];
      out.columns.push_back(s.name() + "(-" + std::to_string(lag) + ")");
      ++c;
    }
  }
  return out;
}

std::pair<QuarterlySeries, QuarterlySeries> hp_filter(const QuarterlySeries& s, double lambda) {
  const int T = static_cast<int>(s.size());
  if (T < 4) throw DataError("hp_filter: series '" + s.name() + "' too short");
  if (lambda < 0.0) throw ConfigError("hp_filter: lambda must be nonnegative");

  // (I + lambda D'D) tau = y with D the (T-2)xT second-difference operator.
  Eigen::SparseMatrix<double> A(T, T);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * T);
  for (int i = 0; i < T; ++i) trip.emplace_back(i, i, 1.0);
  for (int r = 0; r < T - 2; ++r) {
    const int idx[3] = {r, r + 1, r + 2};
    const double coef[3] = {1.0, -2.0, 1.0};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(idx[a], idx[b], lambda * coef[a] * coef[b]);
  }
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw NumericalError("hp_filter: factorization failed");
  Eigen::VectorXd y = s.vector();
  Eigen::VectorXd tau = solver.solve(y);

  std::vector<double> trend(tau.data(), tau.data() + T);
  std::vector<double> cycle(T);
  for (int t = 0; t < T; ++t) cycle[t] = s[t] - trend[t];
  return {QuarterlySeries(s.start(), std::move(trend), s.name() + "_trend"),
          QuarterlySeries(s.start(), std::move(cycle), s.name() + "_cycle")};
}

}  // namespace fiscal
