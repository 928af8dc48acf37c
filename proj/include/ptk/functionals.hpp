#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptk/geometry.hpp"
#include "ptk/measures.hpp"

namespace ptk {

// Finite pole series sum c_k/(z - w_k) plus a polynomial part of degree <= 2.
// The class is closed under every multiplier the evaluation pipeline needs:
// (z-b), (z-b)^2 and difference quotients of its own members.
struct RationalFunction {
  struct Pole {
    cplx location;
    cplx coeff;
  };
  std::vector<Pole> poles;
  cplx poly[3] = {cplx(0.0), cplx(0.0), cplx(0.0)};  // p0 + p1 z + p2 z^2

  // Truncation-error bound on the derivative at the base point, carried by
  // functions built from an infinite family (pole series on a cheese).
  std::optional<double> derivative_tail_bound;

  cplx eval(cplx z) const;
  cplx derivative(cplx z) const;
  bool is_pole(cplx z) const;
};

struct LipProbeResult {
  double lower = 0.0;           // max sampled ratio, a certified lower bound
  double seminorm_upper = 0.0;  // analytic upper bound on sup |f(z)-f(w)|/|z-w|^a
  double sup_upper = 0.0;       // analytic upper bound on sup |f|
};

// Disk hull of the sample region; pole distances are measured against it.
struct RegionInfo {
  cplx center;
  double radius = 1.0;
};

// Lower bound by sampling pairs; upper bounds per pole from
// sup (u+v)^(1-a)/(u v) over u,v >= r, attained at u = v = r, giving the
// constant 2^(1-a) in 2^(1-a) |c| / r^(1+a).
LipProbeResult lip_seminorm_probe(const RationalFunction& f, double alpha,
                                  const std::vector<std::pair<cplx, cplx>>& pairs,
                                  const RegionInfo& region);

// A product measure acting on functions through the antisymmetric kernel
// (f(z)-f(w))/|z-w|^alpha. Norm at most the total variation of the measure.
struct FunctionalHandle {
  ProductMeasure mu;
  double alpha = 0.5;
  enum class Role { Generic, Derivation } role = Role::Generic;
};

FunctionalHandle make_handle(ProductMeasure mu, double alpha);

// Adjusts the weights by the minimum-norm correction so the functional acts
// on powers of (z - b) like the normalized derivation:
// L((z-b)) = 1 and L((z-b)^j) = 0 for 2 <= j <= degree. With degree >= 3 the
// evaluation pipeline's two routes agree exactly on quadratic probes.
FunctionalHandle make_derivation_handle(ProductMeasure mu, cplx b, double alpha,
                                        int degree = 3);

template <typename F>
  requires std::invocable<F&, cplx>
cplx apply_L(const ProductMeasure& mu, double alpha, F&& f) {
  cplx sum = 0.0;
  for (const ProductMeasure::Atom& atom : mu.atoms) {
    if (atom.z == atom.w)
      throw validation_error("functional undefined: diagonal atom");
    sum += atom.weight * (f(atom.z) - f(atom.w)) /
           std::pow(std::abs(atom.z - atom.w), alpha);
  }
  return sum;
}

template <typename F>
  requires std::invocable<F&, cplx>
cplx apply_L(const FunctionalHandle& handle, F&& f) {
  return apply_L(handle.mu, handle.alpha, std::forward<F>(f));
}

cplx apply_L(const FunctionalHandle& handle, const RationalFunction& f);

// Main/residual split of the module action g.L: for every test f,
//   <f g, L(mu)> = <f, L(nu)> + sum f(w) lambda(w)
// exactly, with nu = g(z).mu and lambda collecting the atoms of
// ((g(z)-g(w))/|z-w|^alpha).mu on the w coordinate.
struct ProductDecomposition {
  ProductMeasure nu;
  DiscreteMeasure lambda;
};

template <typename G>
  requires std::invocable<G&, cplx>
ProductDecomposition product_decompose(const FunctionalHandle& handle, G&& g) {
  ProductDecomposition out;
  out.nu.atoms.reserve(handle.mu.atoms.size());
  DiscreteMeasure residual;
  residual.atoms.reserve(handle.mu.atoms.size());
  for (const ProductMeasure::Atom& atom : handle.mu.atoms) {
    if (atom.z == atom.w)
      throw validation_error("functional undefined: diagonal atom");
    out.nu.atoms.push_back({atom.z, atom.w, g(atom.z) * atom.weight});
    const cplx ratio = (g(atom.z) - g(atom.w)) /
                       std::pow(std::abs(atom.z - atom.w), handle.alpha);
    residual.atoms.push_back({atom.w, atom.weight * ratio});
  }
  out.lambda = residual.normalized();
  return out;
}

struct DerivationValue {
  cplx value;
  double tail_bound = 0.0;
};

// Exact pole-series derivative at b plus the stored truncation bound.
DerivationValue derivation_value(const RationalFunction& f, cplx b);

// (f(z) - f(b)) / (z - b); throws on pole hits or z == b.
cplx difference_quotient(const RationalFunction& f, cplx z, cplx b);

// Evaluation/derivation distribution chain at a point a off the support:
//   t1_hat = H(mu)(a), t_hat = 1 - pi (a-b)^2 t1_hat,
//   R_a = T / (pi t_hat(a) (a-z)) with T = -pi (z-b)^2 L(mu),
//   D_a = (R_a - T0)/(a-b) - L(mu), T0 = (z-b) L(mu).
// d_definitional applies those atom sums to g directly; d_closed_form is
//   pi (a-b) (g(a) t1_hat - gT1_hat)   with gT1_hat the transform of g.L(mu).
// The two coincide exactly for derivation-normalized handles and quadratic
// probes vanishing at b; the report carries their gap either way.
struct PipelineResult {
  cplx t1_hat;
  cplx t_hat;
  double mass_check = 0.0;  // |R_a(1) - 1|
  cplx d_definitional;
  cplx d_closed_form;
  double agreement_abs = 0.0;
  double agreement_scale = 1.0;  // magnitude scale the gap is judged against
  double agreement_rel = 0.0;
};

struct TPipelineInputs {
  cplx b;
  cplx a;
  std::function<cplx(cplx)> g;
};

PipelineResult t_pipeline(const FunctionalHandle& handle, const TPipelineInputs& in);

// Intersection of the three potential smallness conditions that cut a full
// area density set at b out of the plane:
//   |a-b|   * (riesz potential of the first marginal, order 1)  <= delta
//   |a-b|^(1+alpha) * h_tilde(mu')                               < delta
//   |a-b|   * (|z-w|-weighted product potential of mu')          < M
// with mu' the slice-avoided measure and M = 6 ||mu'||. K = M + 2 is the
// uniform bound constant reported for the product-transform estimate.
struct GoodSet {
  ProductMeasure mu_avoided;
  DiscreteMeasure marginal;
  double alpha = 0.5;
  cplx base;
  double delta = 1.0;
  double m_constant = 0.0;
  double k_constant = 0.0;

  bool contains(cplx a) const;
};

GoodSet build_good_set(const FunctionalHandle& handle, cplx b, double delta = 1.0);

// Pole series on a cheese: one pole per removed ball at its center, ordered
// by construction, coefficient r_k^(1+alpha)/k^p, with a derivative tail
// bound at the base point from the budget rule.
RationalFunction cheese_test_function(const SwissCheese& cheese, double power = 2.0);

struct ShellStat {
  int n = 0;
  double sup_dev = 0.0;
  double mean_dev = 0.0;
  long samples = 0;
  bool empty = false;
};

struct DerivationReport {
  cplx derivative;
  double tail_bound = 0.0;
  struct Row {
    cplx a;
    int n = 0;
    cplx dq;
    double deviation = 0.0;
    bool in_set = false;
  };
  std::vector<Row> rows;
  std::vector<ShellStat> shells;
  DyadicDensityProfile good_density;

  std::string csv() const;  // a_re,a_im,n,dq_re,dq_im,deviation,in_set
  std::string json_summary() const;
};

struct DqExperimentParams {
  int n_min = 3;
  int n_max = 10;
  long shell_samples = 3000;
  std::uint64_t seed = 7;
  double good_abs_tol = 0.0;  // deviation threshold defining the good set
  int profile_n_max = 10;
  SamplerSpec profile_sampler;
};

// Per-shell difference-quotient deviations |dq - derivative| over E
// intersected with each dyadic shell, plus a density profile of
// {deviation < tol} within E.
DerivationReport dq_convergence_experiment(const RationalFunction& f,
                                           const DerivationValue& derivative,
                                           cplx b,
                                           const std::function<bool(cplx)>& set,
                                           const DqExperimentParams& params);

}  // namespace ptk
