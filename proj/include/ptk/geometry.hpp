#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

struct Ball {
  cplx center;
  double radius = 0.0;
  bool closed = true;

  bool contains(cplx z) const {
    const double d = std::abs(z - center);
    return closed ? d <= radius : d < radius;
  }
};

// Axis-aligned square region.
struct SquareRegion {
  cplx center;
  double half_width = 0.5;

  // Chebyshev distance from the center, the natural metric for a square.
  double cheb(cplx z) const {
    return std::max(std::abs(z.real() - center.real()),
                    std::abs(z.imag() - center.imag()));
  }
  bool strictly_inside(cplx z) const { return cheb(z) < half_width; }
  double dist_to_boundary_from_inside(cplx z) const {
    return half_width - cheb(z);
  }
  // t in [0,1) walks the perimeter counterclockwise from the bottom-left corner.
  cplx boundary_point(double t) const;
};

// Dyadic shell index n >= 1 for x relative to b. Shells are indexed so that
// the boundary circle |x-b| = 2^-n belongs to the shell whose outer radius it
// is: shell n covers 2^-(n+1) < |x-b| <= 2^-n. Points with |x-b| >= 1/2 carry
// no index. Throws for x == b.
std::optional<int> annulus_index(cplx x, cplx b);

// The closed shell 2^-(n+1) <= |x-b| <= 2^-n, used for set intersections.
bool closed_annulus_contains(int n, cplx x, cplx b);

inline double annulus_outer_radius(int n) { return std::ldexp(1.0, -n); }
inline double annulus_inner_radius(int n) { return std::ldexp(1.0, -(n + 1)); }

// Per-shell radius budget s_n = amplitude * ratio^n with ratio in (0,1), so
// the total sum is finite and has a closed form.
struct BudgetRule {
  double amplitude = 1.0;
  double ratio = 0.5;

  double value(int n) const { return amplitude * std::pow(ratio, n); }
  // sum_{n > n_from} s_n
  double tail_sum(int n_from) const {
    return amplitude * std::pow(ratio, n_from + 1) / (1.0 - ratio);
  }
  double total() const { return tail_sum(0); }
  void validate() const;
};

struct AnnulusSummary {
  int n = 0;
  int ball_count = 0;
  double max_radius = 0.0;
  double budget_used = 0.0;  // sum of r^(1+alpha) over balls meeting the shell
  double budget_cap = 0.0;   // s_n / 4^n
};

enum class Membership { Interior, Complement, BallBoundary };

// Bounded open set U = interior(square) \ (union of closed balls + {base}).
// Removed balls sit strictly inside their dyadic shells around the base
// point, one shell per ball, so the per-shell budget sums are exact.
struct SwissCheese {
  SquareRegion square;
  cplx base;  // boundary point of U, accumulation point of removed balls
  double alpha = 0.5;
  BudgetRule budgets;
  int n_max = 0;
  std::vector<Ball> removed;
  std::vector<AnnulusSummary> annuli;

  Membership contains(cplx z) const;
  bool in_u(cplx z) const { return contains(z) == Membership::Interior; }

  // min over: distance to square boundary, distances to ball surfaces, |z-base|.
  // Requires z in U.
  double dist_to_complement(cplx z) const;

  // Re-checks every type invariant by direct summation; throws on violation.
  void validate() const;

  std::string to_json() const;
  static SwissCheese from_json(const std::string& text);
};

struct CheeseParams {
  double alpha = 0.5;
  BudgetRule budgets;
  int n_max = 24;
  int balls_per_annulus = 1;
  std::uint64_t seed = 42;
  SquareRegion square{cplx{0.0, 0.0}, 0.5};
  cplx base{0.0, 0.0};
};

// Deterministic given the seed. Each shell n <= n_max receives
// balls_per_annulus disjoint closed balls at seeded angles, radius chosen as
// the largest value meeting the budget share, the shell interior and the
// pairwise gaps, then shrunk by 0.9. Throws numeric_error naming the first
// infeasible shell.
SwissCheese generate_swiss_cheese(const CheeseParams& params);

struct DensityEntry {
  int n = 0;
  double radius = 0.0;
  double fraction = 0.0;
  double std_error = 0.0;
  long samples = 0;
  bool inconclusive = false;
};

// Estimated area fractions L2(E cap B(b, 2^-n)) / (pi 4^-n) per shell index.
struct DyadicDensityProfile {
  cplx base;
  std::vector<DensityEntry> entries;

  std::string csv() const;  // n,radius,fraction,stderr,samples
};

struct SamplerSpec {
  enum class Mode { Grid, MonteCarlo };
  Mode mode = Mode::Grid;
  // Grid mode: absolute pitch, or 0 for radius/grid_divisor per shell.
  double grid_pitch = 0.0;
  double grid_divisor = 64.0;
  long mc_samples = 20000;
  std::uint64_t seed = 1;
};

// Unbiased per-shell area fractions of {indicator true}. Monte Carlo entries
// carry a binomial standard error; grid entries are deterministic and report
// zero. A shell with no sample points is flagged inconclusive.
DyadicDensityProfile area_density_profile(
    const std::function<bool(cplx)>& indicator, cplx b, int n_max,
    const SamplerSpec& sampler);

}  // namespace ptk
