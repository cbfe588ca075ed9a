#pragma once

#include <vector>

namespace vending::detail {

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule:
//   minimize c.x  subject to  A x = b, x >= 0.
// Rows with negative b are negated internally.
LpResult lp_minimize(std::vector<std::vector<double>> a, std::vector<double> b,
                     const std::vector<double>& c);

}  // namespace vending::detail
