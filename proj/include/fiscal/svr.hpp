#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fiscal/series.hpp"

namespace fiscal {

enum class KernelKind { Linear, Rbf, Polynomial, Sigmoid };

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  double gamma = 1.0;
  double r_offset = 0.0;
  int degree = 3;

  static KernelSpec linear() { return {KernelKind::Linear, 1.0, 0.0, 1}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::Rbf, gamma, 0.0, 1}; }
  static KernelSpec polynomial(double gamma, double r, int d) {
    return {KernelKind::Polynomial, gamma, r, d};
  }
  static KernelSpec sigmoid(double gamma, double r) { return {KernelKind::Sigmoid, gamma, r, 1}; }
};

double kernel_eval(const KernelSpec& k, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2);

// Inputs with stored z-score standardization; rows of X are samples.
struct TrainingSet {
  Eigen::MatrixXd inputs;  // standardized
  Eigen::VectorXd targets;
  Eigen::VectorXd feat_mean;
  Eigen::VectorXd feat_std;

  static TrainingSet standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
  Eigen::VectorXd apply_standardization(const Eigen::VectorXd& x_raw) const;
};

struct SvrModel {
  std::vector<Eigen::VectorXd> support_vectors;  // standardized space
  std::vector<double> dual_weights;              // a_i - a_i*, nonzero
  double bias = 0.0;
  KernelSpec kernel;
  double C = 1.0;
  double epsilon = 0.1;
  Eigen::VectorXd feat_mean;
  Eigen::VectorXd feat_std;
  // training diagnostics
  long iterations = 0;
  double kkt_violation = 0.0;
  double duality_gap = 0.0;
  bool gram_not_psd = false;
  std::vector<double> objective_trace;  // dual objective snapshots

  void save(const std::string& path) const;
  static SvrModel load(const std::string& path);
};

// SMO with maximal-violating-pair selection; tol on the KKT violation.
SvrModel svr_train(const TrainingSet& D, double C, double epsilon, const KernelSpec& k,
                   double tol = 1e-3, long max_passes = 100);

double svr_predict(const SvrModel& m, const Eigen::VectorXd& x_raw);

struct HyperSearch {
  std::vector<double> c_grid = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> epsilon_fracs = {0.01, 0.05, 0.1};   // times std(target)
  std::vector<double> gamma_scales = {0.01, 0.1, 1.0};     // divided by feature count
  std::vector<KernelKind> kernels = {KernelKind::Linear, KernelKind::Rbf};
  int folds = 5;
};

struct SvrShockResult {
  QuarterlySeries residuals;  // demeaned
  SvrModel model;
  double cv_mse = 0.0;
};

// Fits the hyperparameter grid by chronological-block cross validation and
// returns the demeaned in-sample residual series of the best model.
SvrShockResult extract_svr_shocks(const Eigen::VectorXd& targets, const LagMatrix& regressors,
                                  const HyperSearch& search);

}  // namespace fiscal
