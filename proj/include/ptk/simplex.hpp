#pragma once

#include <cstddef>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

// maximize c.x  subject to  A x <= b, x >= 0, with b > 0 so the slack basis
// is feasible. Dense tableau simplex, Dantzig pricing with lowest-index tie
// breaking, permanent switch to Bland's rule after a stall. Deterministic:
// fixed pivot rules, fixed traversal order, no threading.
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major rows x cols
  std::vector<double> b;
  std::vector<double> c;
};

struct LpResult {
  double value = 0.0;
  std::vector<double> x;
  long iterations = 0;
  bool bland_used = false;
};

LpResult simplex_maximize(const LpProblem& lp);

}  // namespace ptk
