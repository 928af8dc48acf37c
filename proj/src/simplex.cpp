#include "ptk/simplex.hpp"

#include <cmath>
#include <limits>

namespace ptk {

namespace {
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kStallTol = 1e-13;
constexpr long kStallLimit = 300;
}  // namespace

LpResult simplex_maximize(const LpProblem& lp) {
  const std::size_t m = lp.rows;
  const std::size_t n = lp.cols;
  if (lp.a.size() != m * n || lp.b.size() != m || lp.c.size() != n)
    throw validation_error("simplex: inconsistent problem dimensions");
  for (double bi : lp.b)
    if (!(bi >= 0.0)) throw validation_error("simplex: requires b >= 0");

  const std::size_t width = n + m + 1;
  std::vector<double> tab((m + 1) * width, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    double* row = tab.data() + i * width;
    for (std::size_t j = 0; j < n; ++j) row[j] = lp.a[i * n + j];
    row[n + i] = 1.0;
    row[width - 1] = lp.b[i];
    basis[i] = n + i;
  }
  {
    double* obj = tab.data() + m * width;
    for (std::size_t j = 0; j < n; ++j) obj[j] = -lp.c[j];
  }

  LpResult result;
  bool bland = false;
  double best = 0.0;
  long stall = 0;
  const long cap = 60 * static_cast<long>(m + n) + 5000;

  while (true) {
    const double* obj = tab.data() + m * width;
    std::size_t enter = width;
    if (!bland) {
      double most = -kReducedCostTol;
      for (std::size_t j = 0; j + 1 < width; ++j)
        if (obj[j] < most) {
          most = obj[j];
          enter = j;
        }
    } else {
      for (std::size_t j = 0; j + 1 < width; ++j)
        if (obj[j] < -kReducedCostTol) {
          enter = j;
          break;
        }
    }
    if (enter == width) break;  // optimal

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double aij = tab[i * width + enter];
      if (aij > kPivotTol) {
        const double ratio = tab[i * width + width - 1] / aij;
        if (ratio < best_ratio - 1e-15) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw numeric_error("simplex: unbounded objective");

    // Pivot on (leave, enter).
    double* prow = tab.data() + leave * width;
    const double inv = 1.0 / prow[enter];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      double* row = tab.data() + r * width;
      const double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    basis[leave] = enter;
    ++result.iterations;

    const double objective = tab[m * width + width - 1];
    if (objective > best + kStallTol * (1.0 + std::fabs(best))) {
      best = objective;
      stall = 0;
    } else if (++stall > kStallLimit && !bland) {
      bland = true;
      result.bland_used = true;
      stall = 0;
    }
    if (result.iterations > cap) throw numeric_error("simplex: iteration cap hit");
  }

  result.value = tab[m * width + width - 1];
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = tab[i * width + width - 1];
  return result;
}

}  // namespace ptk
