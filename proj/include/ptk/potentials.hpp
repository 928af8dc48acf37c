#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptk/geometry.hpp"
#include "ptk/measures.hpp"

namespace ptk {

enum class PotentialKind { Single, Double, Refined, HTilde, HKernel };

// Which side of the threshold the classified set lives on. The single-layer
// and product-kernel sets collect points where the normalized potential is
// large; the Cauchy-kernel sets collect points where it is small.
enum class SetPolarity { LargeIsInSet, SmallIsInSet };

// Parameters of one thresholded potential. The plane is two dimensional
// throughout, so kernel exponents are constrained against d = 2.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Single;
  double s = 1.0;
  double t = 0.0;
  double u = 0.0;
  double alpha = 0.5;
  cplx base;
  double threshold = 1.0;

  void validate() const;  // throws validation_error naming the broken rule
  double dimensionless_exponent() const;
  SetPolarity polarity() const;
  std::string kind_name() const;
};

// sum |c_i| / |x_i - a|^s. Returns +infinity when a hits an atom.
double riesz_potential(const DiscreteMeasure& mu, double s, cplx a);

// sum |c_i| |z_i - w_i|^u / (|z_i - a|^s |w_i - a|^t). u = 0 gives the plain
// product kernel. Returns +infinity on atom collision.
double weighted_potential(const ProductMeasure& mu, double s, double t, double u,
                          cplx a);

// sum |c_i| |z_i - w_i|^(1-alpha) / (|z_i - a| |w_i - a|), identical to
// weighted_potential with s = t = 1, u = 1 - alpha.
double h_tilde(const ProductMeasure& mu, double alpha, cplx a);

// (1/pi) sum c_i (z_i - w_i) / ((z_i - a)(w_i - a) |z_i - w_i|^alpha).
// Satisfies |h_kernel| <= h_tilde / pi pointwise. Throws on atom collision,
// naming the atom.
cplx h_kernel(const ProductMeasure& mu, double alpha, cplx a);

// The dilation-invariant quantity |a-b|^kappa * potential(a) that the
// threshold is applied to; kappa = dimensionless_exponent().
double dimensionless_value(const PotentialSpec& spec, const ProductMeasure& mu,
                           cplx a);
double dimensionless_value(const PotentialSpec& spec, const DiscreteMeasure& mu,
                           cplx a);

// Square grid around a center with a fixed irrational offset so grid points
// never coincide with atom coordinates.
struct GridSpec {
  cplx center;
  double half_extent = 0.5;
  double pitch = 1.0 / 128.0;

  std::vector<cplx> points() const;
};

enum class PointClass { InSet, OutOfSet, Undefined };

struct ExceptionalSetReport {
  PotentialSpec spec;
  GridSpec grid;
  struct Row {
    cplx a;
    double value = 0.0;  // dimensionless thresholded quantity
    PointClass cls = PointClass::OutOfSet;
  };
  std::vector<Row> rows;
  std::vector<std::string> hypothesis_violations;
  DyadicDensityProfile profile;

  std::string csv() const;  // x,y,value,in_set
  std::string json_summary() const;
};

struct ExceptionalParams {
  int profile_n_max = 10;
  SamplerSpec sampler;
};

// Grid classification of {a : |a-b|^kappa * potential >= threshold} (or
// < threshold for the small-side kinds) plus a density profile of the set at
// the base point. Mass hypothesis violations are reported, not fatal.
ExceptionalSetReport classify_exceptional_set(const PotentialSpec& spec,
                                              const DiscreteMeasure& mu,
                                              const GridSpec& grid,
                                              const ExceptionalParams& params);
ExceptionalSetReport classify_exceptional_set(const PotentialSpec& spec,
                                              const ProductMeasure& mu,
                                              const GridSpec& grid,
                                              const ExceptionalParams& params);

// Default threshold for the s = t = u = 1 regime: six times the total mass.
double default_m_threshold(const ProductMeasure& mu);

}  // namespace ptk
