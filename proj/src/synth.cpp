#include "fiscal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "fiscal/csv.hpp"
#include "fiscal/errors.hpp"
#include "fiscal/series.hpp"

namespace fiscal {

namespace {

void check_stable(const DgpParams& p) {
  if (std::fabs(p.rho_r) >= 1.0 || std::fabs(p.rho_g) >= 1.0 ||
      std::fabs(p.rho_y1) + std::fabs(p.rho_y2) >= 1.0)
    throw ConfigError("generate_synthetic: explosive dynamics in DGP parameters");
  const double ec_drift = 1.0 + p.ec_load_r - p.ec_load_g;
  if (std::fabs(ec_drift) >= 1.0)
    throw ConfigError("generate_synthetic: error-correction loadings are explosive");
  if (p.T < 60) throw ConfigError("generate_synthetic: T must be at least 60");
  if (p.sd_eps_t <= 0.0 || p.sd_eps_g <= 0.0 || p.sd_noise_y < 0.0)
    throw ConfigError("generate_synthetic: shock scales must be positive");
}

}  // namespace

void generate_synthetic(const std::string& out_dir, const DgpParams& p, std::uint64_t seed) {
  check_stable(p);
  std::filesystem::create_directories(out_dir);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);

  const int burn = 50;
  const int total = p.T + burn;

  // Log levels; r cointegrates with g through the ec feedback.
  double lr = 5.0, lg = 5.0, ly = 7.0, lm = 6.0, tb3 = 5.0;
  double dy1 = 0.0, dy2 = 0.0, dr1 = 0.0, dg1 = 0.0;

  std::vector<double> vr, vg, vy, vtb3, vm;
  for (int t = 0; t < total; ++t) {
    const double eps_t = p.sd_eps_t * norm(rng);
    const double eps_g = p.sd_eps_g * norm(rng);
    const double e_y = p.sd_noise_y * norm(rng);
    const double dtb3 = p.sd_tb3 * norm(rng);
    const double dm = 0.005 + p.sd_m * norm(rng);
    tb3 += dtb3;
    lm += dm;

    const double u_y = p.beta_sgp * std::max(eps_g, 0.0) + p.beta_sgn * std::min(eps_g, 0.0) +
                       p.beta_srp * std::max(eps_t, 0.0) + p.beta_srn * std::min(eps_t, 0.0) +
                       e_y;
    const double dy = p.rho_y1 * dy1 + p.rho_y2 * dy2 + p.gamma_tb3 * dtb3 + p.delta_m * dm + u_y;
    const double ec = lr - lg;
    const double dr = p.rho_r * dr1 + p.ec_load_r * ec + p.a1 * u_y + eps_t;
    const double dg = p.rho_g * dg1 + p.ec_load_g * ec + p.b2 * eps_t + eps_g;

    lr += dr;
    lg += dg;
    ly += dy;
    dy2 = dy1;
    dy1 = dy;
    dr1 = dr;
    dg1 = dg;

    if (t >= burn) {
      vr.push_back(std::exp(lr));
      vg.push_back(std::exp(lg));
      vy.push_back(std::exp(ly));
      vtb3.push_back(tb3);
      vm.push_back(std::exp(lm));
    }
  }

  const Quarter start{1967, 1};
  write_fred_csv(QuarterlySeries(start, vr, "GRECP"), out_dir + "/r.csv");
  write_fred_csv(QuarterlySeries(start, vg, "GCEC"), out_dir + "/g.csv");
  write_fred_csv(QuarterlySeries(start, vy, "GNPC96"), out_dir + "/y.csv");
  write_fred_csv(QuarterlySeries(start, vtb3, "TB3MS"), out_dir + "/tb3.csv");
  write_fred_csv(QuarterlySeries(start, vm, "MZM"), out_dir + "/mzm.csv");
  write_fred_csv(QuarterlySeries(start, std::vector<double>(p.T, 1.0), "GNPDEF"),
                 out_dir + "/deflator.csv");

  nlohmann::json truth;
  truth["seed"] = seed;
  truth["a1"] = p.a1;
  truth["b2"] = p.b2;
  truth["beta_sgp"] = p.beta_sgp;
  truth["beta_sgn"] = p.beta_sgn;
  truth["beta_srp"] = p.beta_srp;
  truth["beta_srn"] = p.beta_srn;
  truth["gamma_tb3"] = p.gamma_tb3;
  truth["delta_m"] = p.delta_m;
  truth["T"] = p.T;
  std::ofstream out(out_dir + "/ground_truth.json");
  if (!out) throw DataError("cannot write ground truth file in " + out_dir);
  out << truth.dump(2) << "\n";
}

}  // namespace fiscal
