#include "fiscal/svr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "fiscal/errors.hpp"

namespace fiscal {

namespace {

using json = nlohmann::json;

void check_kernel(const KernelSpec& k) {
  if (k.kind != KernelKind::Linear && !(k.gamma > 0.0))
    throw ConfigError("kernel: gamma must be positive");
  if (k.kind == KernelKind::Polynomial && k.degree < 1)
    throw ConfigError("kernel: degree must be >= 1");
}

// Dual objective in beta form: -1/2 b'Kb + y'b - eps*|b|_1 (maximization value).
double dual_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& y, double eps) {
  return -0.5 * beta.dot(K * beta) + y.dot(beta) - eps * beta.lpNorm<1>();
}

std::string kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Polynomial: return "polynomial";
    case KernelKind::Sigmoid: return "sigmoid";
  }
  return "?";
}

KernelKind kernel_from_name(const std::string& s) {
  if (s == "linear") return KernelKind::Linear;
  if (s == "rbf") return KernelKind::Rbf;
  if (s == "polynomial") return KernelKind::Polynomial;
  if (s == "sigmoid") return KernelKind::Sigmoid;
  throw DataError("unknown kernel name: " + s);
}

}  // namespace

double kernel_eval(const KernelSpec& k, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
  if (x1.size() != x2.size()) throw DataError("kernel_eval: dimension mismatch");
  check_kernel(k);
  switch (k.kind) {
    case KernelKind::Linear:
      return x1.dot(x2);
    case KernelKind::Rbf:
      return std::exp(-k.gamma * (x1 - x2).squaredNorm());
    case KernelKind::Polynomial:
      return std::pow(k.gamma * x1.dot(x2) + k.r_offset, k.degree);
    case KernelKind::Sigmoid:
      return std::tanh(k.gamma * x1.dot(x2) + k.r_offset);
  }
  return 0.0;
}

TrainingSet TrainingSet::standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw DataError("TrainingSet: input/target count mismatch");
  if (X.rows() < 2) throw DataError("TrainingSet: need at least two samples");
  TrainingSet out;
  out.feat_mean = X.colwise().mean();
  out.feat_std.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double sd =
        std::sqrt((X.col(j).array() - out.feat_mean[j]).square().sum() / X.rows());
    if (sd <= 0.0)
      throw DataError("TrainingSet: zero-variance feature at column " + std::to_string(j));
    out.feat_std[j] = sd;
  }
  out.inputs = (X.rowwise() - out.feat_mean.transpose()).array().rowwise() /
               out.feat_std.transpose().array();
  out.targets = y;
  return out;
}

Eigen::VectorXd TrainingSet::apply_standardization(const Eigen::VectorXd& x_raw) const {
  if (x_raw.size() != feat_mean.size()) throw DataError("standardization: dimension mismatch");
  return (x_raw - feat_mean).cwiseQuotient(feat_std);
}

SvrModel svr_train(const TrainingSet& D, double C, double epsilon, const KernelSpec& k,
                   double tol, long max_passes) {
  check_kernel(k);
  if (!(C > 0.0)) throw ConfigError("svr_train: C must be positive");
  if (epsilon < 0.0) throw ConfigError("svr_train: epsilon must be nonnegative");
  const Eigen::Index n = D.inputs.rows();
  if (n < 2) throw DataError("svr_train: need at least two samples");

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      K(i, j) = K(j, i) = kernel_eval(k, D.inputs.row(i), D.inputs.row(j));

  bool not_psd = false;
  if (k.kind == KernelKind::Sigmoid) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    not_psd = es.eigenvalues().minCoeff() < -1e-8 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  }

  const Eigen::VectorXd& y = D.targets;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);  // a_i - a_i*
  Eigen::VectorXd g = -y;                           // K*beta - y

  // Directional derivatives of the l1 term: phi_up for increasing beta_q,
  // phi_dn for decreasing.
  auto phi_up = [&](Eigen::Index q) { return g[q] + (beta[q] >= 0.0 ? epsilon : -epsilon); };
  auto phi_dn = [&](Eigen::Index q) { return g[q] + (beta[q] > 0.0 ? epsilon : -epsilon); };

  const long max_updates = std::min<long>(max_passes * n * n, 20'000'000L);
  long updates = 0;
  double violation = 0.0;
  std::vector<double> trace;
  trace.push_back(dual_objective(K, beta, y, epsilon));

  while (true) {
    // Maximal violating pair: i can increase, j can decrease.
    Eigen::Index bi = -1, bj = -1;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index q = 0; q < n; ++q) {
      if (beta[q] < C - 1e-12) {
        const double v = phi_up(q);
        if (v < lo) {
          lo = v;
          bi = q;
        }
      }
      if (beta[q] > -C + 1e-12) {
        const double v = phi_dn(q);
        if (v > hi) {
          hi = v;
          bj = q;
        }
      }
    }
    violation = hi - lo;
    if (bi < 0 || bj < 0 || bi == bj || violation < tol) break;
    if (updates >= max_updates)
      throw NumericalError("svr_train: no convergence after " + std::to_string(updates) +
                           " updates (KKT violation " + std::to_string(violation) + ")");

    // Move beta_i += t, beta_j -= t over t in [0, t_max]; the objective is a
    // convex piecewise quadratic with breakpoints where a weight crosses 0.
    const double t_max = std::min(C - beta[bi], beta[bj] + C);
    double a = K(bi, bi) + K(bj, bj) - 2.0 * K(bi, bj);
    if (a < 1e-12) a = 1e-12;  // indefinite kernels get a damped step

    std::vector<double> brk;
    if (beta[bi] < 0.0 && -beta[bi] < t_max) brk.push_back(-beta[bi]);
    if (beta[bj] > 0.0 && beta[bj] < t_max) brk.push_back(beta[bj]);
    std::sort(brk.begin(), brk.end());
    brk.push_back(t_max);

    double t = t_max;
    double seg_lo = 0.0;
    for (double seg_hi : brk) {
      const double mid = 0.5 * (seg_lo + seg_hi);
      const double si = (beta[bi] + mid) >= 0.0 ? 1.0 : -1.0;
      const double sj = (beta[bj] - mid) > 0.0 ? 1.0 : -1.0;
      const double slope0 = g[bi] - g[bj] + epsilon * (si - sj);  // derivative at t=0 on segment
      const double t_star = -slope0 / a;
      if (t_star <= seg_hi) {
        t = std::max(seg_lo, std::min(seg_hi, t_star));
        break;
      }
      seg_lo = seg_hi;
    }
    if (t <= 0.0) break;  // numerically stuck at a kink

    beta[bi] += t;
    beta[bj] -= t;
    g += t * (K.col(bi) - K.col(bj));
    ++updates;
    if (updates % (4 * n) == 0) trace.push_back(dual_objective(K, beta, y, epsilon));
  }
  trace.push_back(dual_objective(K, beta, y, epsilon));

  // Bias from the KKT interval; unbounded support vectors pin it exactly.
  double sum_b = 0.0;
  int n_free = 0;
  double b_lo = -std::numeric_limits<double>::infinity();
  double b_hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index q = 0; q < n; ++q) {
    const double f_nob = g[q] + y[q];  // (K*beta)_q
    const double center = y[q] - f_nob;
    if (beta[q] > 1e-10 && beta[q] < C - 1e-10) {
      sum_b += center - epsilon;
      ++n_free;
    } else if (beta[q] < -1e-10 && beta[q] > -C + 1e-10) {
      sum_b += center + epsilon;
      ++n_free;
    } else if (std::fabs(beta[q]) <= 1e-10) {
      b_lo = std::max(b_lo, center - epsilon);
      b_hi = std::min(b_hi, center + epsilon);
    } else if (beta[q] >= C - 1e-10) {
      b_hi = std::min(b_hi, center - epsilon);
    } else {
      b_lo = std::max(b_lo, center + epsilon);
    }
  }
  double bias;
  if (n_free > 0) {
    bias = sum_b / n_free;
  } else if (std::isfinite(b_lo) && std::isfinite(b_hi)) {
    bias = 0.5 * (b_lo + b_hi);
  } else if (std::isfinite(b_lo)) {
    bias = b_lo;
  } else if (std::isfinite(b_hi)) {
    bias = b_hi;
  } else {
    bias = y.mean();
  }

  SvrModel m;
  m.kernel = k;
  m.C = C;
  m.epsilon = epsilon;
  m.bias = bias;
  m.feat_mean = D.feat_mean;
  m.feat_std = D.feat_std;
  m.iterations = updates;
  m.kkt_violation = violation;
  m.gram_not_psd = not_psd;
  m.objective_trace = std::move(trace);
  for (Eigen::Index q = 0; q < n; ++q) {
    if (std::fabs(beta[q]) > 1e-10) {
      m.support_vectors.push_back(D.inputs.row(q));
      m.dual_weights.push_back(beta[q]);
    }
  }

  // Duality gap: primal (RKHS norm + eps-insensitive loss) minus dual value.
  double primal = 0.5 * beta.dot(K * beta);
  for (Eigen::Index q = 0; q < n; ++q) {
    const double resid = std::fabs(y[q] - (g[q] + y[q] + bias));
    primal += C * std::max(0.0, resid - epsilon);
  }
  m.duality_gap = primal - dual_objective(K, beta, y, epsilon);
  return m;
}

double svr_predict(const SvrModel& m, const Eigen::VectorXd& x_raw) {
  if (x_raw.size() != m.feat_mean.size()) throw DataError("svr_predict: dimension mismatch");
  const Eigen::VectorXd xs = (x_raw - m.feat_mean).cwiseQuotient(m.feat_std);
  double out = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
    out += m.dual_weights[i] * kernel_eval(m.kernel, m.support_vectors[i], xs);
  return out;
}

void SvrModel::save(const std::string& path) const {
  json j;
  j["format"] = "fiscal-svr-model";
  j["version"] = 1;
  j["kernel"] = {{"kind", kernel_name(kernel.kind)},
                 {"gamma", kernel.gamma},
                 {"r_offset", kernel.r_offset},
                 {"degree", kernel.degree}};
  j["C"] = C;
  j["epsilon"] = epsilon;
  j["bias"] = bias;
  j["feat_mean"] = std::vector<double>(feat_mean.data(), feat_mean.data() + feat_mean.size());
  j["feat_std"] = std::vector<double>(feat_std.data(), feat_std.data() + feat_std.size());
  j["dual_weights"] = dual_weights;
  std::vector<std::vector<double>> svs;
  for (const auto& v : support_vectors)
    svs.emplace_back(v.data(), v.data() + v.size());
  j["support_vectors"] = svs;
  j["diagnostics"] = {{"iterations", iterations},
                      {"kkt_violation", kkt_violation},
                      {"duality_gap", duality_gap},
                      {"gram_not_psd", gram_not_psd}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

SvrModel SvrModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed model file " + path + ": " + e.what());
  }
  if (j.value("format", "") != "fiscal-svr-model" || j.value("version", 0) != 1)
    throw DataError("unsupported model file format in " + path);
  SvrModel m;
  m.kernel.kind = kernel_from_name(j["kernel"]["kind"]);
  m.kernel.gamma = j["kernel"]["gamma"];
  m.kernel.r_offset = j["kernel"]["r_offset"];
  m.kernel.degree = j["kernel"]["degree"];
  m.C = j["C"];
  m.epsilon = j["epsilon"];
  m.bias = j["bias"];
  const auto mean = j["feat_mean"].get<std::vector<double>>();
  const auto sd = j["feat_std"].get<std::vector<double>>();
  m.feat_mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
  m.feat_std = Eigen::Map<const Eigen::VectorXd>(sd.data(), sd.size());
  m.dual_weights = j["dual_weights"].get<std::vector<double>>();
  for (const auto& row : j["support_vectors"]) {
    const auto v = row.get<std::vector<double>>();
    m.support_vectors.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  }
  return m;
}

SvrShockResult extract_svr_shocks(const Eigen::VectorXd& targets, const LagMatrix& regressors,
                                  const HyperSearch& search) {
  const Eigen::Index n = regressors.rows();
  if (targets.size() != n) throw DataError("extract_svr_shocks: target/regressor size mismatch");
  if (n < 3 * search.folds) throw DataError("extract_svr_shocks: sample too short for CV folds");
  const double y_sd = std::sqrt((targets.array() - targets.mean()).square().sum() / n);
  const double m_features = static_cast<double>(regressors.cols());

  struct Candidate {
    double C, eps;
    KernelSpec k;
  };
  std::vector<Candidate> grid;
  for (KernelKind kind : search.kernels) {
    std::vector<double> gammas = {1.0};
    if (kind != KernelKind::Linear) {
      gammas.clear();
      for (double gs : search.gamma_scales) gammas.push_back(gs / m_features);
    }
    for (double C : search.c_grid)
      for (double ef : search.epsilon_fracs)
        for (double gamma : gammas) {
          KernelSpec k;
          k.kind = kind;
          k.gamma = gamma;
          grid.push_back({C, ef * y_sd, k});
        }
  }

  // Chronological blocks: each fold holds out one contiguous span.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  for (int f = 0; f < search.folds; ++f) {
    const Eigen::Index lo = n * f / search.folds;
    const Eigen::Index hi = n * (f + 1) / search.folds;
    blocks.emplace_back(lo, hi);
  }

  double best_mse = std::numeric_limits<double>::infinity();
  const Candidate* best = nullptr;
  for (const auto& cand : grid) {
    double sse = 0.0;
    Eigen::Index n_val = 0;
    bool failed = false;
    for (const auto& [lo, hi] : blocks) {
      Eigen::MatrixXd Xtr(n - (hi - lo), regressors.cols());
      Eigen::VectorXd ytr(n - (hi - lo));
      Eigen::Index r = 0;
      for (Eigen::Index t = 0; t < n; ++t) {
        if (t >= lo && t < hi) continue;
        Xtr.row(r) = regressors.data.row(t);
        ytr[r] = targets[t];
        ++r;
      }
      try {
        const TrainingSet ts = TrainingSet::standardize(Xtr, ytr);
        const SvrModel m = svr_train(ts, cand.C, cand.eps, cand.k);
        for (Eigen::Index t = lo; t < hi; ++t) {
          const double e = targets[t] - svr_predict(m, regressors.data.row(t));
          sse += e * e;
          ++n_val;
        }
      } catch (const std::exception&) {
        failed = true;
        break;
      }
    }
    if (failed || n_val == 0) continue;
    const double mse = sse / n_val;
    if (mse < best_mse) {
      best_mse = mse;
      best = &cand;
    }
  }
  if (!best) throw NumericalError("extract_svr_shocks: every hyperparameter candidate failed");

  const TrainingSet full = TrainingSet::standardize(regressors.data, targets);
  SvrShockResult out{QuarterlySeries(regressors.sample_start, {0.0}, "tmp"),
                     svr_train(full, best->C, best->eps, best->k), best_mse};
  std::vector<double> resid(n);
  double mean = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    resid[t] = targets[t] - svr_predict(out.model, regressors.data.row(t));
    mean += resid[t];
  }
  mean /= static_cast<double>(n);
  for (double& v : resid) v -= mean;  // shocks must be mean zero downstream
  out.residuals = QuarterlySeries(regressors.sample_start, std::move(resid), "svr_resid");
  return out;
}

}  // namespace fiscal
