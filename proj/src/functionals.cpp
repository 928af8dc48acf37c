#include "ptk/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ptk/potentials.hpp"

namespace ptk {

cplx RationalFunction::eval(cplx z) const {
  cplx sum = poly[0] + z * (poly[1] + z * poly[2]);
  for (const Pole& pole : poles) {
    if (z == pole.location)
      throw numeric_error("rational function evaluated at a pole");
    sum += pole.coeff / (z - pole.location);
  }
  return sum;
}

cplx RationalFunction::derivative(cplx z) const {
  cplx sum = poly[1] + 2.0 * z * poly[2];
  for (const Pole& pole : poles) {
    if (z == pole.location)
      throw numeric_error("rational function evaluated at a pole");
    const cplx d = z - pole.location;
    sum -= pole.coeff / (d * d);
  }
  return sum;
}

bool RationalFunction::is_pole(cplx z) const {
  for (const Pole& pole : poles)
    if (z == pole.location) return true;
  return false;
}

LipProbeResult lip_seminorm_probe(const RationalFunction& f, double alpha,
                                  const std::vector<std::pair<cplx, cplx>>& pairs,
                                  const RegionInfo& region) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("0<alpha<1");
  LipProbeResult result;
  for (const auto& [z, w] : pairs) {
    if (z == w) continue;
    const double ratio =
        std::abs(f.eval(z) - f.eval(w)) / std::pow(std::abs(z - w), alpha);
    result.lower = std::max(result.lower, ratio);
  }
  const double diam = 2.0 * region.radius;
  const double reach = std::abs(region.center) + region.radius;
  double semi = 0.0, sup = std::abs(f.poly[0]);
  sup += std::abs(f.poly[1]) * reach + std::abs(f.poly[2]) * reach * reach;
  semi += std::abs(f.poly[1]) * std::pow(diam, 1.0 - alpha);
  semi += std::abs(f.poly[2]) * 2.0 * reach * std::pow(diam, 1.0 - alpha);
  for (const RationalFunction::Pole& pole : f.poles) {
    const double r = std::abs(pole.location - region.center) - region.radius;
    if (!(r > 0.0))
      throw validation_error("pole inside the probe region; bound unavailable");
    semi += std::pow(2.0, 1.0 - alpha) * std::abs(pole.coeff) /
            std::pow(r, 1.0 + alpha);
    sup += std::abs(pole.coeff) / r;
  }
  result.seminorm_upper = semi;
  result.sup_upper = sup;
  return result;
}

FunctionalHandle make_handle(ProductMeasure mu, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("0<alpha<1");
  if (mu.has_diagonal_atom())
    throw validation_error("functional requires no mass on the diagonal");
  return FunctionalHandle{std::move(mu), alpha, FunctionalHandle::Role::Generic};
}

namespace {

// Gaussian elimination with partial pivoting for small complex systems.
std::vector<cplx> solve_small(std::vector<cplx> a, std::vector<cplx> rhs, int k) {
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
    if (std::abs(a[pivot * k + col]) < 1e-14)
      throw numeric_error("moment system is singular; atoms too degenerate");
    if (pivot != col) {
      for (int j = 0; j < k; ++j) std::swap(a[col * k + j], a[pivot * k + j]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (int r = col + 1; r < k; ++r) {
      const cplx f = a[r * k + col] / a[col * k + col];
      for (int j = col; j < k; ++j) a[r * k + j] -= f * a[col * k + j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<cplx> x(k);
  for (int r = k - 1; r >= 0; --r) {
    cplx acc = rhs[r];
    for (int j = r + 1; j < k; ++j) acc -= a[r * k + j] * x[j];
    x[r] = acc / a[r * k + r];
  }
  return x;
}

}  // namespace

FunctionalHandle make_derivation_handle(ProductMeasure mu, cplx b, double alpha,
                                        int degree) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("0<alpha<1");
  if (degree < 1 || degree > 8) throw validation_error("moment degree must be in 1..8");
  if (mu.has_diagonal_atom())
    throw validation_error("functional requires no mass on the diagonal");
  const int k = degree;
  const size_t n = mu.atoms.size();
  if (n < static_cast<size_t>(k))
    throw validation_error("need at least as many atoms as moment conditions");

  // Row j: action on (z-b)^(j+1); target (1, 0, ..., 0).
  std::vector<cplx> rows(static_cast<size_t>(k) * n);
  for (size_t i = 0; i < n; ++i) {
    const ProductMeasure::Atom& atom = mu.atoms[i];
    const double rho = std::pow(std::abs(atom.z - atom.w), alpha);
    cplx pz = 1.0, pw = 1.0;
    for (int j = 0; j < k; ++j) {
      pz *= atom.z - b;
      pw *= atom.w - b;
      rows[static_cast<size_t>(j) * n + i] = (pz - pw) / rho;
    }
  }
  // Minimum-norm correction c += A^H y with (A A^H) y = target - A c, then
  // one refinement pass to push the residual to roundoff.
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<cplx> residual(k);
    for (int j = 0; j < k; ++j) {
      cplx acc = 0.0;
      for (size_t i = 0; i < n; ++i)
        acc += rows[static_cast<size_t>(j) * n + i] * mu.atoms[i].weight;
      residual[j] = (j == 0 ? cplx(1.0) : cplx(0.0)) - acc;
    }
    std::vector<cplx> gram(static_cast<size_t>(k) * k);
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q) {
        cplx acc = 0.0;
        for (size_t i = 0; i < n; ++i)
          acc += rows[static_cast<size_t>(p) * n + i] *
                 std::conj(rows[static_cast<size_t>(q) * n + i]);
        gram[static_cast<size_t>(p) * k + q] = acc;
      }
    const std::vector<cplx> y = solve_small(gram, residual, k);
    for (size_t i = 0; i < n; ++i) {
      cplx corr = 0.0;
      for (int j = 0; j < k; ++j)
        corr += std::conj(rows[static_cast<size_t>(j) * n + i]) * y[static_cast<size_t>(j)];
      mu.atoms[i].weight += corr;
    }
  }
  // The pipeline's exactness rests on these moments; verify them.
  double scale = 1.0 + mu.total_variation();
  for (int j = 0; j < k; ++j) {
    cplx acc = 0.0;
    for (size_t i = 0; i < n; ++i)
      acc += rows[static_cast<size_t>(j) * n + i] * mu.atoms[i].weight;
    const cplx target = j == 0 ? cplx(1.0) : cplx(0.0);
    if (std::abs(acc - target) > 1e-9 * scale)
      throw numeric_error("moment normalization failed to converge");
  }
  return FunctionalHandle{std::move(mu), alpha, FunctionalHandle::Role::Derivation};
}

cplx apply_L(const FunctionalHandle& handle, const RationalFunction& f) {
  return apply_L(handle.mu, handle.alpha, [&f](cplx z) { return f.eval(z); });
}

DerivationValue derivation_value(const RationalFunction& f, cplx b) {
  if (f.is_pole(b)) throw numeric_error("derivative undefined at a pole");
  if (f.derivative_tail_bound && !std::isfinite(*f.derivative_tail_bound))
    throw numeric_error("divergent tail bound; derivative not certified");
  return DerivationValue{f.derivative(b), f.derivative_tail_bound.value_or(0.0)};
}

cplx difference_quotient(const RationalFunction& f, cplx z, cplx b) {
  if (z == b) throw validation_error("difference quotient needs z != b");
  return (f.eval(z) - f.eval(b)) / (z - b);
}

PipelineResult t_pipeline(const FunctionalHandle& handle, const TPipelineInputs& in) {
  const cplx a = in.a;
  const cplx b = in.b;
  const auto& g = in.g;
  const double alpha = handle.alpha;
  const ProductMeasure& mu = handle.mu;
  for (const ProductMeasure::Atom& atom : mu.atoms)
    if (atom.z == a || atom.w == a)
      throw validation_error("evaluation point must avoid the support");

  PipelineResult out;
  out.t1_hat = h_kernel(mu, alpha, a);
  out.t_hat = 1.0 - kPi * (a - b) * (a - b) * out.t1_hat;
  const double t_hat_scale = 1.0 + kPi * std::norm(a - b) * std::abs(out.t1_hat);
  if (std::abs(out.t_hat) < 1e-12 * t_hat_scale)
    throw numeric_error("evaluation functional undefined here: t_hat(a) = 0");

  const auto q = [a](cplx z) { return 1.0 / (a - z); };

  // R_a(1) should be 1 for a derivation-normalized handle.
  const cplx r_of_one =
      -apply_L(mu, alpha, [&](cplx z) { return (z - b) * (z - b) * q(z); }) /
      out.t_hat;
  out.mass_check = std::abs(r_of_one - 1.0);

  const cplx r_of_g =
      -apply_L(mu, alpha, [&](cplx z) { return (z - b) * (z - b) * g(z) * q(z); }) /
      out.t_hat;
  const cplx t0_of_g = apply_L(mu, alpha, [&](cplx z) { return (z - b) * g(z); });
  const cplx l_of_g = apply_L(mu, alpha, g);
  out.d_definitional = (r_of_g - t0_of_g) / (a - b) - l_of_g;

  const cplx g_t1_hat =
      apply_L(mu, alpha, [&](cplx z) { return g(z) * q(z); }) / kPi;
  out.d_closed_form = kPi * (a - b) * (g(a) * out.t1_hat - g_t1_hat);

  out.agreement_abs = std::abs(out.d_definitional - out.d_closed_form);
  out.agreement_scale =
      kPi * std::abs(a - b) * (std::abs(g(a) * out.t1_hat) + std::abs(g_t1_hat)) +
      std::abs(r_of_g) + std::abs(t0_of_g) + std::abs(l_of_g) + 1.0;
  out.agreement_rel = out.agreement_abs / out.agreement_scale;
  return out;
}

bool GoodSet::contains(cplx a) const {
  const double dist = std::abs(a - base);
  if (dist * riesz_potential(marginal, 1.0, a) > delta) return false;
  if (std::pow(dist, 1.0 + alpha) * h_tilde(mu_avoided, alpha, a) >= delta)
    return false;
  if (dist * weighted_potential(mu_avoided, 1.0, 1.0, 1.0, a) >= m_constant)
    return false;
  return true;
}

GoodSet build_good_set(const FunctionalHandle& handle, cplx b, double delta) {
  if (!(delta > 0.0)) throw validation_error("delta must be > 0");
  GoodSet set;
  set.mu_avoided = avoid_vertical_slice(handle.mu, b);
  set.marginal = marginal_first(set.mu_avoided, /*use_total_variation=*/true);
  set.alpha = handle.alpha;
  set.base = b;
  set.delta = delta;
  set.m_constant = default_m_threshold(set.mu_avoided);
  set.k_constant = set.m_constant + 2.0;
  return set;
}

RationalFunction cheese_test_function(const SwissCheese& cheese, double power) {
  RationalFunction f;
  f.poles.reserve(cheese.removed.size());
  int k = 0;
  for (const Ball& ball : cheese.removed) {
    ++k;
    const double coeff =
        std::pow(ball.radius, 1.0 + cheese.alpha) / std::pow(k, power);
    f.poles.push_back({ball.center, cplx(coeff, 0.0)});
  }
  // Tail of the hypothetical continuation past n_max: a ball in shell n obeys
  // r^(1+alpha) <= (s_n/4^n)/count and |center - b| >= 2^-(n+1), so each pole
  // adds at most 4 s_n / k^power to the derivative sum at b.
  const int per = cheese.annuli.empty() ? 1 : cheese.annuli.front().ball_count;
  double tail = 0.0;
  for (int n = cheese.n_max + 1; n <= cheese.n_max + 400; ++n) {
    const double first_index = per * (n - 1) + 1;
    tail += 4.0 * cheese.budgets.value(n) * per / std::pow(first_index, power);
  }
  // Geometric remainder of the budget rule beyond the summed range.
  tail += 4.0 * per * cheese.budgets.tail_sum(cheese.n_max + 400) /
          std::pow(per * (cheese.n_max + 400) + 1.0, power);
  f.derivative_tail_bound = tail;
  return f;
}

std::string DerivationReport::csv() const {
  std::string out = "a_re,a_im,n,dq_re,dq_im,deviation,in_set\n";
  for (const Row& row : rows)
    out += fmt17(row.a.real()) + "," + fmt17(row.a.imag()) + "," +
           std::to_string(row.n) + "," + fmt17(row.dq.real()) + "," +
           fmt17(row.dq.imag()) + "," + fmt17(row.deviation) + "," +
           (row.in_set ? "1" : "0") + "\n";
  return out;
}

std::string DerivationReport::json_summary() const {
  nlohmann::json j;
  j["derivative"] = {derivative.real(), derivative.imag()};
  j["tail_bound"] = tail_bound;
  nlohmann::json shell_rows = nlohmann::json::array();
  for (const ShellStat& s : shells)
    shell_rows.push_back({{"n", s.n},
                          {"sup_dev", s.sup_dev},
                          {"mean_dev", s.mean_dev},
                          {"samples", s.samples},
                          {"empty", s.empty}});
  j["shells"] = std::move(shell_rows);
  nlohmann::json prof = nlohmann::json::array();
  for (const DensityEntry& e : good_density.entries)
    prof.push_back({{"n", e.n},
                    {"fraction", e.fraction},
                    {"stderr", e.std_error},
                    {"samples", e.samples},
                    {"inconclusive", e.inconclusive}});
  j["good_density"] = std::move(prof);
  return j.dump(2);
}

DerivationReport dq_convergence_experiment(const RationalFunction& f,
                                           const DerivationValue& derivative,
                                           cplx b,
                                           const std::function<bool(cplx)>& set,
                                           const DqExperimentParams& params) {
  DerivationReport report;
  report.derivative = derivative.value;
  report.tail_bound = derivative.tail_bound;

  for (int n = params.n_min; n <= params.n_max; ++n) {
    Rng rng(params.seed + static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ull);
    ShellStat stat;
    stat.n = n;
    double sum_dev = 0.0;
    for (long i = 0; i < params.shell_samples; ++i) {
      const cplx a =
          rng.in_annulus(b, annulus_inner_radius(n), annulus_outer_radius(n));
      const bool in_set = set(a) && !f.is_pole(a) && a != b;
      if (!in_set) continue;
      const cplx dq = difference_quotient(f, a, b);
      const double dev = std::abs(dq - derivative.value);
      report.rows.push_back({a, n, dq, dev, true});
      stat.sup_dev = std::max(stat.sup_dev, dev);
      sum_dev += dev;
      ++stat.samples;
    }
    stat.empty = stat.samples == 0;
    if (!stat.empty) stat.mean_dev = sum_dev / stat.samples;
    report.shells.push_back(stat);
  }

  const double tol = params.good_abs_tol > 0.0
                         ? params.good_abs_tol
                         : 0.1 * std::abs(derivative.value);
  const auto good = [&](cplx a) {
    if (!set(a) || a == b || f.is_pole(a)) return false;
    return std::abs(difference_quotient(f, a, b) - derivative.value) < tol;
  };
  report.good_density =
      area_density_profile(good, b, params.profile_n_max, params.profile_sampler);
  return report;
}

}  // namespace ptk
