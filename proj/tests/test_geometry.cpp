#include <cmath>

#include "doctest.h"
#include "ptk/geometry.hpp"

using namespace ptk;

TEST_CASE("annulus index brackets dyadic shells") {
  const cplx b(0.0, 0.0);
  CHECK(annulus_index(cplx(0.3, 0.0), b) == 1);      // 1/4 <= 0.3 < 1/2
  CHECK(annulus_index(cplx(0.0, 0.03125), b) == 5);  // boundary circle joins its outer shell
  CHECK(!annulus_index(cplx(0.7, 0.0), b).has_value());
  CHECK(!annulus_index(cplx(0.5, 0.0), b).has_value());
  CHECK(annulus_index(cplx(0.49999, 0.0), b) == 1);
  CHECK_THROWS_AS((void)annulus_index(b, b), validation_error);
}

TEST_CASE("annulus shells partition the punctured half-disk") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const double r = rng.uniform(1e-9, 0.4999999);
    const cplx x = std::polar(r, rng.uniform(0.0, 2.0 * kPi));
    const auto n = annulus_index(x, cplx(0.0));
    REQUIRE(n.has_value());
    CHECK(*n >= 1);
    CHECK(r <= annulus_outer_radius(*n));
    CHECK(r > annulus_inner_radius(*n));
  }
}

TEST_CASE("swiss cheese generation honors budgets and determinism") {
  CheeseParams params;
  params.n_max = 12;
  const SwissCheese cheese = generate_swiss_cheese(params);
  cheese.validate();
  CHECK(cheese.removed.size() == 12);
  for (const AnnulusSummary& a : cheese.annuli) {
    CHECK(a.ball_count >= 1);
    CHECK(a.budget_used <= a.budget_cap * (1.0 + 1e-12));
    CHECK(a.max_radius > 0.0);
  }
  // r^(1+alpha) <= s_n/4^n holds per ball by direct arithmetic.
  for (size_t i = 0; i < cheese.removed.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    CHECK(std::pow(cheese.removed[i].radius, 1.5) <=
          cheese.budgets.value(n) / std::ldexp(1.0, 2 * n));
  }

  const SwissCheese again = generate_swiss_cheese(params);
  CHECK(cheese.to_json() == again.to_json());

  CheeseParams other = params;
  other.seed = 43;
  CHECK(generate_swiss_cheese(other).to_json() != cheese.to_json());
}

TEST_CASE("multiple balls per annulus stay disjoint") {
  CheeseParams params;
  params.n_max = 8;
  params.balls_per_annulus = 3;
  const SwissCheese cheese = generate_swiss_cheese(params);
  cheese.validate();  // includes pairwise disjointness
  CHECK(cheese.removed.size() == 24);
}

TEST_CASE("zero budget is an infeasible packing") {
  CheeseParams params;
  params.budgets.amplitude = 0.0;
  CHECK_THROWS_WITH_AS((void)generate_swiss_cheese(params),
                       doctest::Contains("annulus 1"), std::exception);
  params.budgets.amplitude = 1.0;
  params.budgets.ratio = 1.0;  // divergent budget sum
  CHECK_THROWS_AS((void)generate_swiss_cheese(params), validation_error);
}

TEST_CASE("membership classification") {
  CheeseParams params;
  params.n_max = 6;
  const SwissCheese cheese = generate_swiss_cheese(params);
  CHECK(cheese.contains(cheese.base) == Membership::Complement);
  const Ball& ball = cheese.removed.front();
  CHECK(cheese.contains(ball.center) == Membership::Complement);
  CHECK(cheese.contains(ball.center + cplx(ball.radius, 0.0)) ==
        Membership::BallBoundary);
  CHECK(cheese.contains(cplx(10.0, 0.0)) == Membership::Complement);
  // A dyadic circle point misses every ball (balls sit strictly inside shells).
  const cplx probe = cheese.base + std::polar(0.25, 1.234);
  CHECK(cheese.contains(probe) == Membership::Interior);
}

TEST_CASE("distance to complement is the min over parts") {
  SwissCheese cheese;
  cheese.square = SquareRegion{cplx(0.0), 1.0};
  cheese.base = cplx(-0.5, -0.3);
  cheese.alpha = 0.5;
  cheese.n_max = 0;
  cheese.removed.push_back(Ball{cplx(-0.15, 0.0), 0.25, true});
  cheese.validate();
  // From z: ball surface 0.1, square edge 0.5, base point 0.3.
  const cplx z(-0.5, 0.0);
  CHECK(cheese.dist_to_complement(z) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS((void)cheese.dist_to_complement(cplx(-0.15, 0.0)), validation_error);
  CHECK_THROWS_AS((void)cheese.dist_to_complement(cplx(5.0, 0.0)), validation_error);
}

TEST_CASE("distance to complement matches a brute-force boundary sweep") {
  SwissCheese cheese;
  cheese.square = SquareRegion{cplx(0.25, 0.25), 0.25};  // base at a corner
  cheese.base = cplx(0.0, 0.0);
  cheese.alpha = 0.5;
  cheese.n_max = 0;
  cheese.validate();

  // Empty square, base at the corner: along the diagonal the complement
  // distance is |z-b| sin(pi/4), a nontangential constant of 1/sqrt(2).
  for (int m = 2; m <= 8; ++m) {
    const cplx z = cplx(1.0, 1.0) * std::ldexp(1.0, -m);
    const double d = cheese.dist_to_complement(z);
    CHECK(d == doctest::Approx(std::abs(z) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(d / std::abs(z - cheese.base) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }

  // Brute force: sample the square edge and ball circles densely.
  SwissCheese holes = cheese;
  holes.removed.push_back(Ball{cplx(0.3, 0.3), 0.08, true});
  holes.removed.push_back(Ball{cplx(0.15, 0.38), 0.05, true});
  holes.validate();
  Rng rng(3);
  const int boundary_samples = 20000;
  for (int trial = 0; trial < 25; ++trial) {
    const cplx z(rng.uniform(0.02, 0.48), rng.uniform(0.02, 0.48));
    if (holes.contains(z) != Membership::Interior) continue;
    double brute = std::abs(z - holes.base);
    for (int i = 0; i < boundary_samples; ++i) {
      const double t = (i + 0.5) / boundary_samples;
      brute = std::min(brute, std::abs(z - holes.square.boundary_point(t)));
      for (const Ball& ball : holes.removed)
        brute = std::min(brute, std::abs(z - (ball.center +
                                              std::polar(ball.radius,
                                                         2.0 * kPi * t))));
    }
    const double exact = holes.dist_to_complement(z);
    CHECK(exact <= brute + 1e-12);
    CHECK(brute - exact <= 1e-3);  // sweep resolution
    CHECK(exact <= std::abs(z - holes.base));
  }
}

TEST_CASE("density profile of trivial indicators") {
  SamplerSpec grid;
  grid.mode = SamplerSpec::Mode::Grid;
  const auto full = area_density_profile([](cplx) { return true; }, cplx(0.0), 6, grid);
  for (const DensityEntry& e : full.entries) CHECK(e.fraction == 1.0);

  const auto half = area_density_profile(
      [](cplx z) { return z.imag() > 0.0; }, cplx(0.0), 6, grid);
  for (const DensityEntry& e : half.entries)
    CHECK(e.fraction == doctest::Approx(0.5).epsilon(1e-12));

  SamplerSpec mc;
  mc.mode = SamplerSpec::Mode::MonteCarlo;
  mc.mc_samples = 40000;
  mc.seed = 9;
  const auto half_mc = area_density_profile(
      [](cplx z) { return z.imag() > 0.0; }, cplx(0.0), 5, mc);
  for (const DensityEntry& e : half_mc.entries)
    CHECK(std::fabs(e.fraction - 0.5) <= 3.0 * e.std_error);
}

TEST_CASE("density profile of a concentric disk matches 4^(k-n)") {
  const int k = 4;
  const auto inside = [&](cplx z) { return std::abs(z) <= annulus_outer_radius(k); };
  SamplerSpec mc;
  mc.mode = SamplerSpec::Mode::MonteCarlo;
  mc.mc_samples = 60000;
  mc.seed = 5;
  const auto profile = area_density_profile(inside, cplx(0.0), 8, mc);
  for (const DensityEntry& e : profile.entries) {
    const double expect = e.n >= k ? 1.0 : std::pow(4.0, e.n - k);
    CHECK(std::fabs(e.fraction - expect) <= 3.0 * e.std_error + 1e-9);
  }
}

TEST_CASE("cheese density profile agrees with exact ball-area summation") {
  CheeseParams params;
  params.n_max = 14;
  const SwissCheese cheese = generate_swiss_cheese(params);
  SamplerSpec grid;
  grid.mode = SamplerSpec::Mode::Grid;
  grid.grid_divisor = 96.0;
  const auto profile = area_density_profile(
      [&cheese](cplx z) { return cheese.in_u(z); }, cheese.base, 8, grid);
  for (const DensityEntry& e : profile.entries) {
    // Balls of shell m >= n lie wholly inside B(b, 2^-n); all others miss it.
    double removed_area = 0.0;
    for (size_t i = 0; i < cheese.removed.size(); ++i)
      if (static_cast<int>(i) + 1 >= e.n)
        removed_area += kPi * cheese.removed[i].radius * cheese.removed[i].radius;
    const double expect = 1.0 - removed_area / (kPi * e.radius * e.radius);
    CHECK(std::fabs(e.fraction - expect) <= 0.01);
  }
  CHECK(profile.entries.back().fraction >= 0.999);
}

TEST_CASE("coarse absolute pitch yields inconclusive entries") {
  SamplerSpec grid;
  grid.mode = SamplerSpec::Mode::Grid;
  grid.grid_pitch = 0.3;  // far larger than deep shells
  const auto profile =
      area_density_profile([](cplx) { return true; }, cplx(0.0), 6, grid);
  CHECK(profile.entries.back().inconclusive);
  CHECK(profile.entries.back().samples == 0);
}

TEST_CASE("edge-based square caps density at one half") {
  // With the base at a square edge midpoint, half of every small ball around
  // it lies outside the square, so the density of U cannot exceed 1/2.
  CheeseParams params;
  params.square = SquareRegion{cplx(0.5, 0.0), 0.5};
  params.base = cplx(0.0, 0.0);
  params.n_max = 8;
  const SwissCheese cheese = generate_swiss_cheese(params);
  SamplerSpec mc;
  mc.mode = SamplerSpec::Mode::MonteCarlo;
  mc.mc_samples = 30000;
  mc.seed = 21;
  const auto profile = area_density_profile(
      [&cheese](cplx z) { return cheese.in_u(z); }, cheese.base, 6, mc);
  for (const DensityEntry& e : profile.entries)
    CHECK(e.fraction <= 0.5 + 3.0 * e.std_error);
}

TEST_CASE("cheese json round trip") {
  CheeseParams params;
  params.n_max = 10;
  const SwissCheese cheese = generate_swiss_cheese(params);
  const SwissCheese back = SwissCheese::from_json(cheese.to_json());
  CHECK(back.to_json() == cheese.to_json());
  CHECK(back.removed.size() == cheese.removed.size());
  for (size_t i = 0; i < back.removed.size(); ++i) {
    CHECK(back.removed[i].center == cheese.removed[i].center);
    CHECK(back.removed[i].radius == cheese.removed[i].radius);
  }
}
