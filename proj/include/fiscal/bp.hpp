#pragma once

#include <utility>

#include "fiscal/series.hpp"

namespace fiscal {

// Identification restrictions. a1 is the output elasticity of net revenue;
// b1 and a2 stay zero outside research mode.
struct BpRestrictions {
  double a1 = 2.0;
  double b1 = 0.0;
  double a2 = 0.0;
};

struct StructuralShocks {
  QuarterlySeries eps_T;
  QuarterlySeries eps_G;
  QuarterlySeries eps_GNP;
  double b2 = 0.0, b2_se = 0.0;
  double c1 = 0.0, c1_se = 0.0;
  double c2 = 0.0, c2_se = 0.0;
};

// Cyclical adjustment: t_ca = u_r - a1*u_y, g_ca = u_g - b1*u_y.
std::pair<QuarterlySeries, QuarterlySeries> cyclically_adjust(const QuarterlySeries& u_r,
                                                              const QuarterlySeries& u_g,
                                                              const QuarterlySeries& u_y,
                                                              const BpRestrictions& r);

// Sequential identification: eps_T from the cyclical adjustment, eps_G as
// the residual of u_g on eps_T, eps_GNP as the residual of u_y on both.
StructuralShocks identify_structural(const QuarterlySeries& u_r, const QuarterlySeries& u_g,
                                     const QuarterlySeries& u_y, const BpRestrictions& r);

}  // namespace fiscal
