#include "ptk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace ptk {

std::optional<int> annulus_index(cplx x, cplx b) {
  const double r = std::abs(x - b);
  if (r == 0.0) throw validation_error("annulus undefined at base point");
  if (r >= 0.5) return std::nullopt;
  int n = static_cast<int>(std::floor(-std::log2(r)));
  // Pin the invariant 2^-(n+1) < r <= 2^-n against log rounding.
  while (r > std::ldexp(1.0, -n)) --n;
  while (r <= std::ldexp(1.0, -(n + 1))) ++n;
  return n;
}

bool closed_annulus_contains(int n, cplx x, cplx b) {
  const double r = std::abs(x - b);
  return r >= annulus_inner_radius(n) && r <= annulus_outer_radius(n);
}

cplx SquareRegion::boundary_point(double t) const {
  const double side = 2.0 * half_width;
  const double u = (t - std::floor(t)) * 4.0;
  const double frac = u - std::floor(u);
  const cplx corner = center - cplx(half_width, half_width);
  switch (static_cast<int>(u) % 4) {
    case 0: return corner + cplx(frac * side, 0.0);
    case 1: return corner + cplx(side, frac * side);
    case 2: return corner + cplx(side - frac * side, side);
    default: return corner + cplx(0.0, side - frac * side);
  }
}

void BudgetRule::validate() const {
  if (!(amplitude > 0.0))
    throw validation_error("budget amplitude must be > 0 (sum s_n finite and positive)");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw validation_error("budget ratio must satisfy 0 < ratio < 1 (sum s_n < infinity)");
}

Membership SwissCheese::contains(cplx z) const {
  if (z == base) return Membership::Complement;
  if (!square.strictly_inside(z)) return Membership::Complement;
  for (const Ball& ball : removed) {
    const double d = std::abs(z - ball.center);
    if (d < ball.radius) return Membership::Complement;
    if (d == ball.radius) return Membership::BallBoundary;
  }
  return Membership::Interior;
}

double SwissCheese::dist_to_complement(cplx z) const {
  if (contains(z) != Membership::Interior)
    throw validation_error("dist_to_complement requires a point of U");
  double d = square.dist_to_boundary_from_inside(z);
  d = std::min(d, std::abs(z - base));
  for (const Ball& ball : removed)
    d = std::min(d, std::abs(z - ball.center) - ball.radius);
  return d;
}

void SwissCheese::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("0<alpha<1");
  budgets.validate();
  std::vector<int> per_annulus(static_cast<size_t>(n_max) + 1, 0);
  std::vector<double> used(static_cast<size_t>(n_max) + 1, 0.0);
  for (size_t i = 0; i < removed.size(); ++i) {
    const Ball& ball = removed[i];
    if (!(ball.radius > 0.0)) throw validation_error("ball radius must be > 0");
    if (square.cheb(ball.center) + ball.radius >= square.half_width)
      throw validation_error("removed ball leaves the bounding square");
    if (std::abs(base - ball.center) <= ball.radius)
      throw validation_error("removed ball contains the base point");
    for (size_t j = i + 1; j < removed.size(); ++j) {
      const Ball& other = removed[j];
      if (std::abs(ball.center - other.center) <= ball.radius + other.radius)
        throw validation_error("removed balls intersect");
    }
    // A ball contributes to every closed shell it meets.
    const double lo = std::abs(ball.center - base) - ball.radius;
    const double hi = std::abs(ball.center - base) + ball.radius;
    for (int n = 1; n <= n_max; ++n) {
      if (lo <= annulus_outer_radius(n) && hi >= annulus_inner_radius(n))
        used[static_cast<size_t>(n)] += std::pow(ball.radius, 1.0 + alpha),
            ++per_annulus[static_cast<size_t>(n)];
    }
  }
  for (int n = 1; n <= n_max; ++n) {
    const double cap = budgets.value(n) / std::ldexp(1.0, 2 * n);
    if (used[static_cast<size_t>(n)] > cap * (1.0 + 1e-12))
      throw validation_error("per-annulus budget exceeded at index " + std::to_string(n));
    if (per_annulus[static_cast<size_t>(n)] == 0)
      throw validation_error("annulus without removed ball at index " + std::to_string(n));
  }
}

SwissCheese generate_swiss_cheese(const CheeseParams& params) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw validation_error("0<alpha<1");
  // The ratio rule is structural (finite budget sum); a vanishing amplitude
  // is reported as a packing failure at the first annulus instead.
  if (!(params.budgets.ratio > 0.0 && params.budgets.ratio < 1.0))
    throw validation_error("budget ratio must satisfy 0 < ratio < 1 (sum s_n < infinity)");
  if (params.n_max < 1) throw validation_error("annuli count must be >= 1");
  if (params.balls_per_annulus < 1) throw validation_error("balls per annulus must be >= 1");
  if (params.square.cheb(params.base) > params.square.half_width)
    throw validation_error("base point must lie in the closed bounding square");

  SwissCheese cheese;
  cheese.square = params.square;
  cheese.base = params.base;
  cheese.alpha = params.alpha;
  cheese.budgets = params.budgets;
  cheese.n_max = params.n_max;

  Rng rng(params.seed);
  const int k = params.balls_per_annulus;
  for (int n = 1; n <= params.n_max; ++n) {
    const double cap = params.budgets.value(n) / std::ldexp(1.0, 2 * n);
    const double share = cap / k;
    if (!(share > 0.0))
      throw numeric_error("infeasible packing at annulus " + std::to_string(n) +
                          ": zero radius budget");
    const double r_budget = std::pow(share, 1.0 / (1.0 + params.alpha));
    const double rho = 0.75 * annulus_outer_radius(n);
    const double r_shell = 0.25 * annulus_outer_radius(n);
    // Even base angles with a bounded jitter keep a guaranteed angular gap.
    double r_sep = std::numeric_limits<double>::infinity();
    if (k > 1) r_sep = rho * std::sin(0.75 * kPi / k);

    const double base_angle = rng.uniform(0.0, 2.0 * kPi);
    std::vector<cplx> centers;
    double r_square = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      const double jitter = (rng.uniform() - 0.5) * (2.0 * kPi / k) * 0.25;
      cplx center =
          params.base + std::polar(rho, base_angle + 2.0 * kPi * j / k + jitter);
      int tries = 0;
      while (params.square.cheb(center) + 0.5 * r_shell >= params.square.half_width) {
        // Custom squares can clip part of the shell; redraw the angle.
        if (++tries > 500)
          throw numeric_error("infeasible packing at annulus " + std::to_string(n) +
                              ": no room inside the bounding square");
        center = params.base + std::polar(rho, rng.uniform(0.0, 2.0 * kPi));
      }
      centers.push_back(center);
      r_square = std::min(r_square,
                          params.square.half_width - params.square.cheb(center));
    }
    double radius = 0.9 * std::min(std::min(r_budget, r_shell),
                                   std::min(r_sep, r_square));
    if (!(radius > 1e-300))
      throw numeric_error("infeasible packing at annulus " + std::to_string(n));
    AnnulusSummary summary;
    summary.n = n;
    summary.budget_cap = cap;
    for (const cplx& center : centers) {
      cheese.removed.push_back(Ball{center, radius, true});
      summary.ball_count += 1;
      summary.max_radius = std::max(summary.max_radius, radius);
      summary.budget_used += std::pow(radius, 1.0 + params.alpha);
    }
    cheese.annuli.push_back(summary);
  }
  cheese.validate();
  return cheese;
}

std::string SwissCheese::to_json() const {
  nlohmann::json j;
  j["format"] = "ptk-cheese/1";
  j["alpha"] = alpha;
  j["square"] = {{"center", {square.center.real(), square.center.imag()}},
                 {"half_width", square.half_width}};
  j["base"] = {base.real(), base.imag()};
  j["budget"] = {{"amplitude", budgets.amplitude}, {"ratio", budgets.ratio}};
  j["n_max"] = n_max;
  nlohmann::json balls = nlohmann::json::array();
  for (const Ball& ball : removed)
    balls.push_back({{"center", {ball.center.real(), ball.center.imag()}},
                     {"radius", ball.radius}});
  j["balls"] = std::move(balls);
  nlohmann::json ann = nlohmann::json::array();
  for (const AnnulusSummary& a : annuli)
    ann.push_back({{"n", a.n},
                   {"count", a.ball_count},
                   {"max_radius", a.max_radius},
                   {"budget_used", a.budget_used},
                   {"budget_cap", a.budget_cap}});
  j["annuli"] = std::move(ann);
  return j.dump(2);
}

SwissCheese SwissCheese::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<std::string>() != "ptk-cheese/1")
    throw validation_error("unknown cheese document format");
  SwissCheese cheese;
  cheese.alpha = j.at("alpha").get<double>();
  const auto& sq = j.at("square");
  cheese.square.center = cplx(sq.at("center")[0].get<double>(),
                              sq.at("center")[1].get<double>());
  cheese.square.half_width = sq.at("half_width").get<double>();
  cheese.base = cplx(j.at("base")[0].get<double>(), j.at("base")[1].get<double>());
  cheese.budgets.amplitude = j.at("budget").at("amplitude").get<double>();
  cheese.budgets.ratio = j.at("budget").at("ratio").get<double>();
  cheese.n_max = j.at("n_max").get<int>();
  for (const auto& ball : j.at("balls"))
    cheese.removed.push_back(Ball{cplx(ball.at("center")[0].get<double>(),
                                       ball.at("center")[1].get<double>()),
                                  ball.at("radius").get<double>(), true});
  for (const auto& a : j.at("annuli"))
    cheese.annuli.push_back(AnnulusSummary{a.at("n").get<int>(),
                                           a.at("count").get<int>(),
                                           a.at("max_radius").get<double>(),
                                           a.at("budget_used").get<double>(),
                                           a.at("budget_cap").get<double>()});
  cheese.validate();
  return cheese;
}

std::string DyadicDensityProfile::csv() const {
  std::string out = "n,radius,fraction,stderr,samples\n";
  for (const DensityEntry& e : entries) {
    out += std::to_string(e.n) + "," + fmt17(e.radius) + ",";
    if (e.inconclusive) {
      out += "nan,nan,0\n";
    } else {
      out += fmt17(e.fraction) + "," + fmt17(e.std_error) + "," +
             std::to_string(e.samples) + "\n";
    }
  }
  return out;
}

DyadicDensityProfile area_density_profile(
    const std::function<bool(cplx)>& indicator, cplx b, int n_max,
    const SamplerSpec& sampler) {
  if (n_max < 1) throw validation_error("n_max must be >= 1");
  DyadicDensityProfile profile;
  profile.base = b;
  for (int n = 1; n <= n_max; ++n) {
    const double radius = annulus_outer_radius(n);
    DensityEntry entry;
    entry.n = n;
    entry.radius = radius;
    long hits = 0;
    long total = 0;
    if (sampler.mode == SamplerSpec::Mode::Grid) {
      const double pitch = sampler.grid_pitch > 0.0
                               ? sampler.grid_pitch
                               : radius / sampler.grid_divisor;
      const long cells = static_cast<long>(std::floor(radius / pitch));
      for (long i = -cells; i < cells; ++i) {
        for (long j = -cells; j < cells; ++j) {
          const cplx z = b + cplx((i + 0.5) * pitch, (j + 0.5) * pitch);
          if (std::abs(z - b) > radius) continue;
          ++total;
          if (indicator(z)) ++hits;
        }
      }
      entry.std_error = 0.0;
    } else {
      Rng rng(sampler.seed + static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ull);
      for (long i = 0; i < sampler.mc_samples; ++i) {
        const cplx z = rng.in_disk(b, radius);
        ++total;
        if (indicator(z)) ++hits;
      }
      if (total > 0) {
        const double p = static_cast<double>(hits) / static_cast<double>(total);
        entry.std_error = std::max(std::sqrt(p * (1.0 - p) / total),
                                   1.0 / static_cast<double>(total));
      }
    }
    entry.samples = total;
    if (total == 0) {
      entry.inconclusive = true;
    } else {
      entry.fraction = static_cast<double>(hits) / static_cast<double>(total);
    }
    profile.entries.push_back(entry);
  }
  return profile;
}

}  // namespace ptk
