#include "ptk/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "json.hpp"
#include "ptk/simplex.hpp"

namespace ptk {

namespace {

std::vector<cplx> lattice(cplx center, double half_extent, double pitch,
                          double inner_cheb_skip = 0.0) {
  std::vector<cplx> out;
  const long cells = static_cast<long>(std::floor(half_extent / pitch));
  for (long i = -cells; i < cells; ++i) {
    for (long j = -cells; j < cells; ++j) {
      const cplx z = center + cplx((i + 0.5) * pitch, (j + 0.5) * pitch);
      const double cheb = std::max(std::abs(z.real() - center.real()),
                                   std::abs(z.imag() - center.imag()));
      if (cheb <= inner_cheb_skip) continue;
      out.push_back(z);
    }
  }
  return out;
}

}  // namespace

std::vector<cplx> surrounding_lattice(cplx center, double half_extent, double pitch) {
  std::vector<cplx> out;
  for (const cplx& z : lattice(center, 1.5 * half_extent, 2.0 * pitch))
    out.push_back(z);
  for (const cplx& z : lattice(center, 6.0 * half_extent, 8.0 * pitch,
                               1.5 * half_extent))
    out.push_back(z);
  return out;
}

DiscretizedCompact DiscretizedCompact::from_indicator(
    cplx center, double half_extent, double pitch,
    const std::function<bool(cplx)>& inside, const std::string& label) {
  if (!(pitch > 0.0)) throw validation_error("cell size must be > 0");
  DiscretizedCompact set;
  set.cell = pitch;
  set.label = label;
  for (const cplx& z : lattice(center, half_extent, pitch))
    if (inside(z)) set.support.push_back(z);

  set.constraints = set.support;
  // Surrounding lattice: denser near the set, a coarse ring farther out. Far
  // constraints are slack for decaying kernels; the far_check lattice records
  // how slack after the solve.
  for (const cplx& z : surrounding_lattice(center, half_extent, pitch))
    set.constraints.push_back(z);
  set.far_check = lattice(center, 8.0 * half_extent, 16.0 * pitch, 2.0 * half_extent);
  return set;
}

DiscretizedCompact DiscretizedCompact::from_ball(const Ball& ball, double divisor) {
  return from_indicator(
      ball.center, ball.radius, ball.radius / divisor,
      [&ball](cplx z) { return std::abs(z - ball.center) <= ball.radius; }, "ball");
}

DiscretizedCompact DiscretizedCompact::from_balls(const std::vector<Ball>& balls,
                                                  double divisor) {
  if (balls.empty()) throw validation_error("ball union must be nonempty");
  double lo_x = balls[0].center.real(), hi_x = lo_x;
  double lo_y = balls[0].center.imag(), hi_y = lo_y;
  double r_max = 0.0;
  for (const Ball& ball : balls) {
    lo_x = std::min(lo_x, ball.center.real() - ball.radius);
    hi_x = std::max(hi_x, ball.center.real() + ball.radius);
    lo_y = std::min(lo_y, ball.center.imag() - ball.radius);
    hi_y = std::max(hi_y, ball.center.imag() + ball.radius);
    r_max = std::max(r_max, ball.radius);
  }
  const cplx center(0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y));
  const double half_extent =
      0.5 * std::max(hi_x - lo_x, hi_y - lo_y) + 1e-12;
  return from_indicator(
      center, half_extent, r_max / divisor,
      [balls](cplx z) {
        for (const Ball& ball : balls)
          if (ball.contains(z)) return true;
        return false;
      },
      "ball-union");
}

DiscretizedCompact DiscretizedCompact::from_annulus(
    cplx b, int n, double divisor, const std::function<bool(cplx)>& inside) {
  const double r = annulus_outer_radius(n);
  return from_indicator(
      b, r, r / divisor,
      [b, n, inside](cplx z) {
        return closed_annulus_contains(n, z, b) && inside(z);
      },
      "annulus-" + std::to_string(n));
}

double cell_kernel(double dist, double s, double cell) {
  const double rho = cell / std::sqrt(kPi);
  const double cap = (2.0 / (2.0 - s)) * std::pow(rho, -s);
  if (dist <= 0.0) return cap;
  return std::min(std::pow(dist, -s), cap);
}

CapacityEstimate capacity_lp(const DiscretizedCompact& set, double s) {
  if (!(s > 0.0 && s < 2.0)) throw validation_error("0<s<d (d=2)");
  if (set.support.empty()) throw validation_error("empty discretized set");

  const std::size_t n = set.support.size();
  const std::size_t m = set.constraints.size();
  LpProblem lp;
  lp.rows = m;
  lp.cols = n;
  lp.a.resize(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      lp.a[i * n + j] =
          cell_kernel(std::abs(set.constraints[i] - set.support[j]), s, set.cell);
  lp.b.assign(m, 1.0);
  lp.c.assign(n, 1.0);

  const LpResult solved = simplex_maximize(lp);

  CapacityEstimate estimate;
  estimate.value = solved.value;
  estimate.s = s;
  estimate.cell = set.cell;
  estimate.bias_note =
      "constraints sampled at grid points only: the value is an over-relaxation "
      "and shrinks under refinement";
  estimate.diag.support_size = n;
  estimate.diag.constraint_count = m;
  estimate.diag.iterations = solved.iterations;
  estimate.diag.mass_total = solved.value;
  for (std::size_t i = 0; i < m; ++i) {
    double potential = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      potential += solved.x[j] * lp.a[i * n + j];
    if (potential >= 1.0 - 1e-7) ++estimate.diag.active_constraints;
  }
  for (double mass : solved.x) estimate.diag.mass_max = std::max(estimate.diag.mass_max, mass);
  for (const cplx& y : set.far_check) {
    double potential = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      potential += solved.x[j] * cell_kernel(std::abs(y - set.support[j]), s, set.cell);
    estimate.diag.far_check_max = std::max(estimate.diag.far_check_max, potential);
  }
  return estimate;
}

std::vector<CapacityEstimate> ball_refinement_sequence(const Ball& ball, double s,
                                                       int levels,
                                                       double support_divisor,
                                                       double base_divisor) {
  DiscretizedCompact base = DiscretizedCompact::from_ball(ball, support_divisor);
  std::vector<CapacityEstimate> out;
  DiscretizedCompact set;
  set.support = base.support;
  set.cell = base.cell;
  set.far_check = base.far_check;
  set.constraints = base.support;
  for (int level = 0; level < levels; ++level) {
    const double pitch = ball.radius / (base_divisor * std::ldexp(1.0, level));
    const std::vector<cplx> ring =
        surrounding_lattice(ball.center, ball.radius, pitch);
    set.constraints.insert(set.constraints.end(), ring.begin(), ring.end());
    set.label = "ball-level-" + std::to_string(level);
    out.push_back(capacity_lp(set, s));
  }
  return out;
}

double aitken_extrapolate(const std::vector<double>& values) {
  if (values.size() < 3) {
    if (values.empty()) throw validation_error("no values to extrapolate");
    return values.back();
  }
  const double v0 = values[values.size() - 3];
  const double v1 = values[values.size() - 2];
  const double v2 = values[values.size() - 1];
  const double denom = (v2 - v1) - (v1 - v0);
  if (std::fabs(denom) < 1e-15 * (std::fabs(v0) + std::fabs(v1) + std::fabs(v2)))
    return v2;
  return v2 - (v2 - v1) * (v2 - v1) / denom;
}

double lebesgue_lower_bound(double area, double s, double d, double c) {
  if (!(c > 0.0)) throw validation_error("calibration constant c must be > 0");
  if (!(area >= 0.0)) throw validation_error("area must be >= 0");
  return c * std::pow(area, s / d);
}

double hausdorff_content_upper(const std::vector<Ball>& cover, double beta) {
  if (!(beta > 0.0)) throw validation_error("content order beta must be > 0");
  double sum = 0.0;
  for (const Ball& ball : cover) sum += std::pow(ball.radius, beta);
  return sum;
}

std::string WienerSeriesReport::csv() const {
  std::string out = "n,capacity,term,partial_sum\n";
  for (const WienerEntry& e : entries)
    out += std::to_string(e.n) + "," + fmt17(e.capacity) + "," + fmt17(e.term) +
           "," + fmt17(e.partial_sum) + "\n";
  return out;
}

std::string WienerSeriesReport::json_summary() const {
  nlohmann::json j;
  j["s"] = s;
  j["base"] = {base.real(), base.imag()};
  j["verdict"] = to_string(verdict);
  j["fit_ratio"] = fit_ratio;
  nlohmann::json rows = nlohmann::json::array();
  for (const WienerEntry& e : entries)
    rows.push_back({{"n", e.n},
                    {"capacity", e.capacity},
                    {"term", e.term},
                    {"partial_sum", e.partial_sum},
                    {"support", e.support},
                    {"constraints", e.constraints},
                    {"iterations", e.iterations}});
  j["entries"] = std::move(rows);
  return j.dump(2);
}

WienerSeriesReport wiener_partial_sums(const std::function<bool(cplx)>& set,
                                       cplx b, double s,
                                       const WienerParams& params) {
  if (!(s > 0.0 && s < 2.0)) throw validation_error("0<s<d (d=2)");
  if (params.n_min < 1 || params.n_max < params.n_min)
    throw validation_error("shell range must satisfy 1 <= n_min <= n_max");

  WienerSeriesReport report;
  report.s = s;
  report.base = b;

  std::vector<std::future<CapacityEstimate>> solves;
  for (int n = params.n_min; n <= params.n_max; ++n) {
    solves.push_back(std::async(std::launch::async, [&, n]() {
      DiscretizedCompact shell =
          DiscretizedCompact::from_annulus(b, n, params.pitch_divisor, set);
      if (shell.support.empty()) return CapacityEstimate{};  // empty shell, zero term
      return capacity_lp(shell, s);
    }));
  }

  double partial = 0.0;
  for (int n = params.n_min; n <= params.n_max; ++n) {
    const CapacityEstimate estimate = solves[static_cast<size_t>(n - params.n_min)].get();
    WienerEntry entry;
    entry.n = n;
    entry.capacity = estimate.value;
    entry.term = std::pow(2.0, s * n) * entry.capacity;
    partial += entry.term;
    entry.partial_sum = partial;
    entry.support = estimate.diag.support_size;
    entry.constraints = estimate.diag.constraint_count;
    entry.iterations = estimate.diag.iterations;
    report.entries.push_back(entry);
  }

  // Trend over the last ceil(half) of the computed terms.
  const std::size_t count = report.entries.size();
  const std::size_t half = (count + 1) / 2;
  std::vector<double> tail_terms;
  std::vector<int> tail_n;
  for (std::size_t i = count - half; i < count; ++i) {
    tail_terms.push_back(report.entries[i].term);
    tail_n.push_back(report.entries[i].n);
  }
  double tail_max = 0.0, tail_min = std::numeric_limits<double>::infinity();
  for (double term : tail_terms) {
    tail_max = std::max(tail_max, term);
    tail_min = std::min(tail_min, term);
  }
  if (tail_max <= 1e-12) {
    report.verdict = TrendVerdict::BoundedTrend;  // terms died out
    report.fit_ratio = 0.0;
    return report;
  }
  // Least-squares geometric fit log(term) ~ const + n log(rho), zeros masked.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long pts = 0;
  for (std::size_t i = 0; i < tail_terms.size(); ++i) {
    if (tail_terms[i] <= 1e-12) continue;
    const double x = tail_n[i];
    const double y = std::log(tail_terms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++pts;
  }
  if (pts < 2) {
    report.verdict = TrendVerdict::BoundedTrend;
    report.fit_ratio = 0.0;
    return report;
  }
  const double denom = pts * sxx - sx * sx;
  const double slope = denom != 0.0 ? (pts * sxy - sx * sy) / denom : 0.0;
  report.fit_ratio = std::exp(slope);
  if (report.fit_ratio <= params.ratio_threshold)
    report.verdict = TrendVerdict::BoundedTrend;
  else if (tail_min >= params.divergence_floor)
    report.verdict = TrendVerdict::DivergingTrend;
  else
    report.verdict = TrendVerdict::Inconclusive;
  return report;
}

Thinness s_thin_verdict(const WienerSeriesReport& report) {
  switch (report.verdict) {
    case TrendVerdict::BoundedTrend: return Thinness::ThinTrend;
    case TrendVerdict::DivergingTrend: return Thinness::NotThinTrend;
    default: return Thinness::Inconclusive;
  }
}

const char* to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::BoundedTrend: return "bounded-trend";
    case TrendVerdict::DivergingTrend: return "diverging-trend";
    default: return "inconclusive";
  }
}

const char* to_string(Thinness v) {
  switch (v) {
    case Thinness::ThinTrend: return "thin-trend";
    case Thinness::NotThinTrend: return "not-thin-trend";
    default: return "inconclusive";
  }
}

}  // namespace ptk
