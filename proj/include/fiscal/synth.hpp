#pragma once

#include <cstdint>
#include <string>

namespace fiscal {

// Parameters of the synthetic data-generating process used for validation.
// The structural block mirrors the identification system; the asymmetry
// betas enter the output innovation through sign-split shocks.
struct DgpParams {
  // structural coefficients
  double a1 = 2.0;
  double b2 = 0.3;
  // asymmetry multipliers on the sign-split spending/revenue shocks
  double beta_sgp = 0.4;
  double beta_sgn = 0.2;
  double beta_srp = -0.1;
  double beta_srn = -0.12;
  // dynamics
  double rho_y1 = 0.2;
  double rho_y2 = 0.1;
  double gamma_tb3 = 0.002;
  double delta_m = 0.1;
  double ec_load_r = -0.1;
  double ec_load_g = 0.05;
  double rho_r = 0.2;
  double rho_g = 0.2;
  // noise scales
  double sd_eps_t = 0.01;
  double sd_eps_g = 0.01;
  double sd_noise_y = 0.005;
  double sd_tb3 = 0.15;
  double sd_m = 0.01;
  int T = 240;
};

// Writes FRED-format CSVs (r, g, y, tb3, mzm, deflator) plus the
// ground-truth parameter file into out_dir. Deterministic in the seed.
void generate_synthetic(const std::string& out_dir, const DgpParams& params, std::uint64_t seed);

}  // namespace fiscal
