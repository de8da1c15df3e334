#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace fiscal {

// Calendar quarter, compared through its integer index (year*4 + q-1).
struct Quarter {
  int year = 1967;
  int q = 1;  // 1..4

  int index() const { return year * 4 + (q - 1); }
  static Quarter from_index(int idx);
  Quarter plus(int quarters) const { return from_index(index() + quarters); }

  bool operator==(const Quarter& o) const { return index() == o.index(); }
  bool operator<(const Quarter& o) const { return index() < o.index(); }
  std::string str() const;  // "1967Q1"
  static Quarter parse(const std::string& s);
};

// Dated quarterly series; values are finite, length >= 1.
class QuarterlySeries {
 public:
  QuarterlySeries(Quarter start, std::vector<double> values, std::string name);

  const Quarter& start() const { return start_; }
  Quarter end() const { return start_.plus(static_cast<int>(values_.size()) - 1); }
  const std::vector<double>& values() const { return values_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }
  Quarter date_at(std::size_t t) const { return start_.plus(static_cast<int>(t)); }

  QuarterlySeries renamed(std::string name) const;
  QuarterlySeries slice(Quarter from, Quarter to) const;
  Eigen::VectorXd vector() const;

 private:
  Quarter start_;
  std::vector<double> values_;
  std::string name_;
};

// Regressor matrix with named columns; rows start at sample_start after
// lag trimming. Every cell is populated.
struct LagMatrix {
  Eigen::MatrixXd data;
  std::vector<std::string> columns;
  Quarter sample_start;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

// Deflate a nominal series; the deflator is rescaled so its annual average
// in base_year equals 1.
QuarterlySeries deflate(const QuarterlySeries& nominal, const QuarterlySeries& deflator,
                        int base_year);

QuarterlySeries transform_log(const QuarterlySeries& s);

QuarterlySeries transform_diff(const QuarterlySeries& s, int order = 1);

// Truncate all series to their maximal common quarter range.
std::vector<QuarterlySeries> align(const std::vector<QuarterlySeries>& series_list);

// Stacks current values and lags of aligned series into a complete matrix.
// lags_per_series[i] lags are taken of series i; when include_current[i] is
// set its contemporaneous value is a column too. The first max-lag rows drop.
LagMatrix build_lag_matrix(const std::vector<QuarterlySeries>& series_list,
                           const std::vector<int>& lags_per_series,
                           const std::vector<bool>& include_current);

// Hodrick-Prescott decomposition; solves the pentadiagonal normal equations
// (I + lambda D'D) tau = y. cycle = y - trend exactly.
std::pair<QuarterlySeries, QuarterlySeries> hp_filter(const QuarterlySeries& s, double lambda);

}  // namespace fiscal
