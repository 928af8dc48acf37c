#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptk/geometry.hpp"

namespace ptk {

// Grid discretization of a compact target set: candidate support points are
// cell centers inside the set; constraint points add a surrounding lattice
// where the extremal-measure potential is held <= 1.
struct DiscretizedCompact {
  std::vector<cplx> support;
  double cell = 0.0;
  std::vector<cplx> constraints;      // includes the support points
  std::vector<cplx> far_check;        // coarse lattice for post-hoc slack check
  std::string label;

  static DiscretizedCompact from_indicator(cplx center, double half_extent,
                                           double pitch,
                                           const std::function<bool(cplx)>& inside,
                                           const std::string& label = "set");
  static DiscretizedCompact from_ball(const Ball& ball, double divisor);
  static DiscretizedCompact from_balls(const std::vector<Ball>& balls,
                                       double divisor);
  // Closed dyadic shell n around b intersected with an indicator, cell size
  // 2^-n / divisor.
  static DiscretizedCompact from_annulus(cplx b, int n, double divisor,
                                         const std::function<bool(cplx)>& inside);
};

struct CapacityDiagnostics {
  std::size_t support_size = 0;
  std::size_t constraint_count = 0;
  long iterations = 0;
  std::size_t active_constraints = 0;
  double mass_total = 0.0;
  double mass_max = 0.0;
  double far_check_max = 0.0;  // max potential on the far lattice, want <= ~1
};

// Extremal-measure value: maximize total mass subject to the discretized
// kernel potential <= 1 at every constraint point. Sampled constraints make
// this an over-relaxation, so values carry an upward bias that shrinks under
// refinement.
struct CapacityEstimate {
  double value = 0.0;
  double s = 0.0;
  double cell = 0.0;
  std::string bias_note;
  CapacityDiagnostics diag;
};

// Kernel entry |x-y|^-s, capped at the analytic mean of |x|^-s over a disk of
// the cell's area: (2/(2-s)) * (h/sqrt(pi))^-s. The cap is the value used for
// a support point constrained at its own location.
double cell_kernel(double dist, double s, double cell);

CapacityEstimate capacity_lp(const DiscretizedCompact& set, double s);

// The surrounding constraint lattice used by from_indicator at a given pitch:
// a denser layer near the set plus a coarse far ring.
std::vector<cplx> surrounding_lattice(cplx center, double half_extent, double pitch);

// Refinement at fixed support: the support grid is pinned at
// radius/support_divisor while the constraint lattice pitch halves per level
// and the sets accumulate. Growing nested constraints make the sequence
// monotone nonincreasing up to solver tolerance.
std::vector<CapacityEstimate> ball_refinement_sequence(const Ball& ball, double s,
                                                       int levels,
                                                       double support_divisor = 16.0,
                                                       double base_divisor = 4.0);

// Aitken extrapolation of a geometrically converging sequence; returns the
// last value when the steps do not contract.
double aitken_extrapolate(const std::vector<double>& values);

// c * area^(s/d): the capacity lower bound through d-dimensional volume.
double lebesgue_lower_bound(double area, double s, double d, double c);

// sum r_i^beta over a countable ball cover; an upper bound on content.
double hausdorff_content_upper(const std::vector<Ball>& cover, double beta);

enum class TrendVerdict { BoundedTrend, DivergingTrend, Inconclusive };

struct WienerEntry {
  int n = 0;
  double capacity = 0.0;
  double term = 0.0;  // 2^(s n) * capacity
  double partial_sum = 0.0;
  // Audit trail of the per-shell solve.
  std::size_t support = 0;
  std::size_t constraints = 0;
  long iterations = 0;
};

struct WienerParams {
  int n_min = 1;
  int n_max = 10;
  double pitch_divisor = 12.0;
  double ratio_threshold = 0.8;    // geometric-decay fit cutoff for bounded
  double divergence_floor = 0.05;  // positive lower bound for diverging
};

struct WienerSeriesReport {
  double s = 0.0;
  cplx base;
  std::vector<WienerEntry> entries;
  TrendVerdict verdict = TrendVerdict::Inconclusive;
  double fit_ratio = 0.0;

  std::string csv() const;  // n,capacity,term,partial_sum
  std::string json_summary() const;
};

// Per-shell capacities of A_n(b) intersected with E, the dyadic series terms
// 2^(s n) C_s, partial sums, and a finite-range trend verdict. A finite run
// can only report trends, never the infinite-series fact itself. Shell
// solves run in parallel; entries merge in index order.
WienerSeriesReport wiener_partial_sums(const std::function<bool(cplx)>& set,
                                       cplx b, double s,
                                       const WienerParams& params);

enum class Thinness { ThinTrend, NotThinTrend, Inconclusive };

// Thinness vocabulary for a series trend: a bounded trend is evidence that E
// is s-thin at b, a diverging trend that it is not.
Thinness s_thin_verdict(const WienerSeriesReport& report);

const char* to_string(TrendVerdict v);
const char* to_string(Thinness v);

}  // namespace ptk
