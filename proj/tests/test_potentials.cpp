#include <cmath>

#include "doctest.h"
#include "ptk/functionals.hpp"
#include "ptk/potentials.hpp"
#include "test_util.hpp"

using namespace ptk;
using testutil::random_product_measure;

TEST_CASE("single-layer potential values") {
  DiscreteMeasure mu;
  mu.atoms.push_back({cplx(0.0, 0.0), cplx(1.0, 0.0)});
  CHECK(riesz_potential(mu, 1.0, cplx(2.0, 0.0)) == doctest::Approx(0.5));
  CHECK(std::isinf(riesz_potential(mu, 1.0, cplx(0.0, 0.0))));
  mu.atoms.push_back({cplx(0.0, 1.0), cplx(0.0, -1.0)});  // |weight| = 1
  CHECK(riesz_potential(mu, 1.0, cplx(0.0, 2.0)) == doctest::Approx(1.0 / 2.0 + 1.0));
  CHECK_THROWS_AS((void)riesz_potential(mu, 2.5, cplx(1.0, 0.0)), validation_error);
}

TEST_CASE("product kernel potential values") {
  ProductMeasure mu;
  mu.atoms.push_back({cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(1.0, 0.0)});
  const cplx a(0.0, 0.0);  // |z-a| = 1, |w-a| = 2
  const double sep = std::abs(mu.atoms[0].z - mu.atoms[0].w);
  CHECK(weighted_potential(mu, 1.0, 1.0, 0.5, a) ==
        doctest::Approx(std::sqrt(sep) / 2.0));
  CHECK(weighted_potential(mu, 1.0, 1.0, 0.0, a) == doctest::Approx(0.5));
  CHECK(std::isinf(weighted_potential(mu, 1.0, 1.0, 0.0, mu.atoms[0].z)));

  // s = t kernels are swap invariant.
  Rng rng(31);
  const ProductMeasure random = random_product_measure(rng, 7, cplx(0.0));
  const cplx probe(0.1, -0.2);
  CHECK(weighted_potential(random, 0.7, 0.7, 0.4, probe) ==
        doctest::Approx(weighted_potential(swap_pushforward(random), 0.7, 0.7, 0.4,
                                           probe)));
}

TEST_CASE("h_tilde equals the refined kernel with u = 1 - alpha") {
  Rng rng(32);
  const ProductMeasure mu = random_product_measure(rng, 9, cplx(0.0));
  for (int i = 0; i < 20; ++i) {
    const cplx a = rng.in_disk(cplx(0.0), 2.0);
    CHECK(h_tilde(mu, 0.3, a) ==
          doctest::Approx(weighted_potential(mu, 1.0, 1.0, 0.7, a)));
  }
  ProductMeasure unit;
  unit.atoms.push_back({cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)});
  // |z-a| = |w-a| = |z-w| = 1 at a below.
  CHECK(h_tilde(unit, 0.5, cplx(0.5, std::sqrt(3.0) / 2.0)) == doctest::Approx(1.0));
}

TEST_CASE("cauchy kernel: single-term formula and domination by h_tilde/pi") {
  ProductMeasure mu;
  const cplx z(0.4, 0.1), w(-0.3, 0.6), c(1.2, -0.8);
  mu.atoms.push_back({z, w, c});
  const double alpha = 0.37;
  const cplx a(2.0, 1.0);
  const cplx expect =
      c * (z - w) / (kPi * (z - a) * (w - a) * std::pow(std::abs(z - w), alpha));
  CHECK(std::abs(h_kernel(mu, alpha, a) - expect) <= 1e-15);

  Rng rng(33);
  const ProductMeasure random = random_product_measure(rng, 8, cplx(0.0));
  for (int i = 0; i < 20; ++i) {
    const cplx probe = rng.in_disk(cplx(0.0), 2.5);
    const double big = h_tilde(random, alpha, probe);
    if (std::isinf(big)) continue;
    CHECK(std::abs(h_kernel(random, alpha, probe)) <= big / kPi + 1e-12);
  }
  CHECK_THROWS_WITH_AS((void)h_kernel(mu, alpha, z), doctest::Contains("atom 0"),
                       numeric_error);
}

TEST_CASE("cauchy kernel splits by partial fractions and matches the functional") {
  Rng rng(34);
  const double alpha = 0.55;
  const ProductMeasure mu = random_product_measure(rng, 10, cplx(0.0));
  for (int i = 0; i < 10; ++i) {
    const cplx a = rng.on_ring(cplx(0.0), 1.8, 3.0);
    const cplx h = h_kernel(mu, alpha, a);
    // 1/((z-a)(w-a)) = (1/(z-w)) (1/(w-a) - 1/(z-a)) recombines the kernel as
    // a difference of two single-pole sums.
    cplx split = 0.0;
    for (const auto& atom : mu.atoms) {
      const double rho = std::pow(std::abs(atom.z - atom.w), alpha);
      split += atom.weight / rho * (1.0 / (atom.w - a) - 1.0 / (atom.z - a));
    }
    split /= kPi;
    CHECK(testutil::rel_gap(h, split) <= 1e-12);

    // Same value through the functional applied to 1/(pi (a - zeta)).
    const cplx through_l = apply_L(mu, alpha, [a](cplx zeta) {
      return 1.0 / (kPi * (a - zeta));
    });
    CHECK(testutil::rel_gap(h, through_l) <= 1e-12);
  }
}

TEST_CASE("potentials are linear and dilation covariant") {
  Rng rng(35);
  const cplx b(0.3, -0.1);
  ProductMeasure mu = random_product_measure(rng, 6, b);
  const cplx a = b + cplx(0.9, 0.4);
  const double base = weighted_potential(mu, 0.8, 0.6, 0.5, a);

  ProductMeasure scaled = mu;
  for (auto& atom : scaled.atoms) atom.weight *= 3.0;
  CHECK(weighted_potential(scaled, 0.8, 0.6, 0.5, a) == doctest::Approx(3.0 * base));

  // Dilation about b by lambda multiplies the refined kernel by
  // lambda^-(s+t-u) and leaves |a-b|^(s+t-u) * potential unchanged.
  const double lambda = 1.7;
  ProductMeasure dilated;
  for (const auto& atom : mu.atoms)
    dilated.atoms.push_back({b + lambda * (atom.z - b), b + lambda * (atom.w - b),
                             atom.weight});
  const cplx a_dilated = b + lambda * (a - b);
  const double kappa = 0.8 + 0.6 - 0.5;
  CHECK(weighted_potential(dilated, 0.8, 0.6, 0.5, a_dilated) ==
        doctest::Approx(base * std::pow(lambda, -kappa)).epsilon(1e-12));
  PotentialSpec spec;
  spec.kind = PotentialKind::Refined;
  spec.s = 0.8;
  spec.t = 0.6;
  spec.u = 0.5;
  spec.base = b;
  CHECK(dimensionless_value(spec, dilated, a_dilated) ==
        doctest::Approx(dimensionless_value(spec, mu, a)).epsilon(1e-12));
}

TEST_CASE("potential spec validation names the broken rule") {
  PotentialSpec spec;
  spec.kind = PotentialKind::Double;
  spec.s = 1.0;
  spec.t = 1.0;
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("s+t<d"), validation_error);
  spec.kind = PotentialKind::Refined;
  spec.u = 1.0;
  CHECK_NOTHROW(spec.validate());  // the s = t = u = 1 regime is refined-only
  spec.u = 1.2;
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("min{1,s,t}"),
                       validation_error);
  spec.kind = PotentialKind::HTilde;
  spec.alpha = 1.0;
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("0<alpha<1"),
                       validation_error);
}

TEST_CASE("huge threshold empties the classified set") {
  DiscreteMeasure mu;
  mu.atoms.push_back({cplx(1.5, 0.0), cplx(1.0, 0.0)});
  PotentialSpec spec;
  spec.kind = PotentialKind::Single;
  spec.s = 1.0;
  spec.base = cplx(0.0);
  spec.threshold = 1e9;
  GridSpec grid;
  grid.center = spec.base;
  grid.half_extent = 0.5;
  grid.pitch = 1.0 / 32.0;
  ExceptionalParams params;
  params.profile_n_max = 6;
  params.sampler.mode = SamplerSpec::Mode::Grid;
  params.sampler.grid_divisor = 16.0;
  const auto report = classify_exceptional_set(spec, mu, grid, params);
  for (const auto& row : report.rows) CHECK(row.cls == PointClass::OutOfSet);
  for (const auto& entry : report.profile.entries) CHECK(entry.fraction == 0.0);
  CHECK(report.hypothesis_violations.empty());
}

TEST_CASE("single-atom threshold set matches the apollonius disk complement") {
  // One unit atom at x0, |x0 - b| = 0.5, s = 1, threshold 1/2: the set
  // {|a-b| / |x0-a| >= 1/2} is the complement of the open disk centered at
  // -x0/3 with radius 2|x0|/3 (b at the origin).
  const cplx x0(0.5, 0.0);
  DiscreteMeasure mu;
  mu.atoms.push_back({x0, cplx(1.0, 0.0)});
  PotentialSpec spec;
  spec.kind = PotentialKind::Single;
  spec.s = 1.0;
  spec.base = cplx(0.0);
  spec.threshold = 0.5;
  GridSpec grid;
  grid.center = spec.base;
  grid.half_extent = 0.6;
  grid.pitch = 1.0 / 128.0;
  ExceptionalParams params;
  params.profile_n_max = 5;
  params.sampler.mode = SamplerSpec::Mode::Grid;
  params.sampler.grid_divisor = 16.0;
  const auto report = classify_exceptional_set(spec, mu, grid, params);
  const cplx center = -x0 / 3.0;
  const double radius = 2.0 * std::abs(x0) / 3.0;
  size_t agree = 0, total = 0;
  for (const auto& row : report.rows) {
    if (row.cls == PointClass::Undefined) continue;
    ++total;
    const bool closed_form = std::abs(row.a - center) >= radius;
    if (closed_form == (row.cls == PointClass::InSet)) ++agree;
  }
  CHECK(total > 20000);
  CHECK(static_cast<double>(agree) / total >= 0.999);
}

TEST_CASE("mass at the base point is flagged, not fatal") {
  const cplx b(0.0, 0.0);
  DiscreteMeasure mu;
  mu.atoms.push_back({b, cplx(1.0, 0.0)});
  PotentialSpec spec;
  spec.kind = PotentialKind::Single;
  spec.s = 0.5;
  spec.base = b;
  GridSpec grid;
  grid.center = b;
  grid.half_extent = 0.25;
  grid.pitch = 1.0 / 16.0;
  ExceptionalParams params;
  params.profile_n_max = 3;
  params.sampler.mode = SamplerSpec::Mode::Grid;
  params.sampler.grid_divisor = 8.0;
  const auto report = classify_exceptional_set(spec, mu, grid, params);
  REQUIRE(report.hypothesis_violations.size() == 1);
  CHECK(report.hypothesis_violations[0] ==
        "measure has mass at the base point");

  ProductMeasure pair;
  pair.atoms.push_back({b, cplx(0.5, 0.0), cplx(1.0, 0.0)});
  PotentialSpec pair_spec;
  pair_spec.kind = PotentialKind::Double;
  pair_spec.s = 0.6;
  pair_spec.t = 0.6;
  pair_spec.base = b;
  const auto pair_report = classify_exceptional_set(pair_spec, pair, grid, params);
  CHECK(pair_report.hypothesis_violations.size() == 1);

  PotentialSpec h_spec;
  h_spec.kind = PotentialKind::HTilde;
  h_spec.alpha = 0.5;
  h_spec.base = b;
  const auto h_report = classify_exceptional_set(h_spec, pair, grid, params);
  CHECK(h_report.hypothesis_violations.empty());  // only (b,b) mass matters here
}

TEST_CASE("good-polarity sets fill in toward the base point") {
  Rng rng(36);
  const ProductMeasure mu = random_product_measure(rng, 5, cplx(0.0), 0.4, 1.0);
  PotentialSpec spec;
  spec.kind = PotentialKind::HTilde;
  spec.alpha = 0.5;
  spec.base = cplx(0.02, 0.01);
  spec.threshold = 1.0;
  GridSpec grid;
  grid.center = spec.base;
  grid.half_extent = 0.3;
  grid.pitch = 1.0 / 64.0;
  ExceptionalParams params;
  params.profile_n_max = 8;
  params.sampler.mode = SamplerSpec::Mode::MonteCarlo;
  params.sampler.mc_samples = 4000;
  params.sampler.seed = 2;
  const auto report = classify_exceptional_set(spec, mu, grid, params);
  CHECK(report.spec.polarity() == SetPolarity::SmallIsInSet);
  // Away from the atoms the lever |a-b|^(1+alpha) wins near b.
  CHECK(report.profile.entries.back().fraction >= 0.99);
}

TEST_CASE("default m threshold is six times the mass") {
  Rng rng(37);
  const ProductMeasure mu = random_product_measure(rng, 4, cplx(0.0));
  CHECK(default_m_threshold(mu) == doctest::Approx(6.0 * mu.total_variation()));
}
