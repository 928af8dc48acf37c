#include "ptk/potentials.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace ptk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void PotentialSpec::validate() const {
  if (!(threshold > 0.0)) throw validation_error("threshold must be > 0");
  switch (kind) {
    case PotentialKind::Single:
      if (!(s > 0.0 && s < 2.0)) throw validation_error("single kind requires 0<s<d (d=2)");
      break;
    case PotentialKind::Double:
      if (!(s > 0.0 && t > 0.0)) throw validation_error("double kind requires s>0 and t>0");
      if (!(s + t < 2.0))
        throw validation_error("double kind requires s+t<d (d=2); the s+t=2 regime needs the refined kind");
      break;
    case PotentialKind::Refined:
      if (!(s > 0.0 && t > 0.0)) throw validation_error("refined kind requires s>0 and t>0");
      if (!(u > 0.0 && u <= std::min({1.0, s, t})))
        throw validation_error("refined kind requires 0<u<=min{1,s,t}");
      if (!(s + t - u < 2.0)) throw validation_error("refined kind requires s+t-u<d (d=2)");
      break;
    case PotentialKind::HTilde:
    case PotentialKind::HKernel:
      if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("0<alpha<1");
      break;
  }
}

double PotentialSpec::dimensionless_exponent() const {
  switch (kind) {
    case PotentialKind::Single: return s;
    case PotentialKind::Double: return s + t;
    case PotentialKind::Refined: return s + t - u;
    case PotentialKind::HTilde:
    case PotentialKind::HKernel: return 1.0 + alpha;
  }
  return 0.0;
}

SetPolarity PotentialSpec::polarity() const {
  switch (kind) {
    case PotentialKind::HTilde:
    case PotentialKind::HKernel: return SetPolarity::SmallIsInSet;
    default: return SetPolarity::LargeIsInSet;
  }
}

std::string PotentialSpec::kind_name() const {
  switch (kind) {
    case PotentialKind::Single: return "single";
    case PotentialKind::Double: return "double";
    case PotentialKind::Refined: return "refined";
    case PotentialKind::HTilde: return "h-tilde";
    case PotentialKind::HKernel: return "h-kernel";
  }
  return "?";
}

double riesz_potential(const DiscreteMeasure& mu, double s, cplx a) {
  if (!(s > 0.0 && s < 2.0)) throw validation_error("0<s<d (d=2)");
  double sum = 0.0;
  for (const DiscreteMeasure::Atom& atom : mu.atoms) {
    const double d = std::abs(atom.location - a);
    if (d == 0.0) return kInf;
    sum += std::abs(atom.weight) / std::pow(d, s);
  }
  return sum;
}

double weighted_potential(const ProductMeasure& mu, double s, double t, double u,
                          cplx a) {
  double sum = 0.0;
  for (const ProductMeasure::Atom& atom : mu.atoms) {
    const double dz = std::abs(atom.z - a);
    const double dw = std::abs(atom.w - a);
    if (dz == 0.0 || dw == 0.0) return kInf;
    double term = std::abs(atom.weight) / (std::pow(dz, s) * std::pow(dw, t));
    if (u != 0.0) term *= std::pow(std::abs(atom.z - atom.w), u);
    sum += term;
  }
  return sum;
}

double h_tilde(const ProductMeasure& mu, double alpha, cplx a) {
  return weighted_potential(mu, 1.0, 1.0, 1.0 - alpha, a);
}

cplx h_kernel(const ProductMeasure& mu, double alpha, cplx a) {
  cplx sum = 0.0;
  for (size_t i = 0; i < mu.atoms.size(); ++i) {
    const ProductMeasure::Atom& atom = mu.atoms[i];
    const cplx dz = atom.z - a;
    const cplx dw = atom.w - a;
    if (dz == cplx(0.0, 0.0) || dw == cplx(0.0, 0.0))
      throw numeric_error("h_kernel: evaluation point collides with atom " +
                          std::to_string(i) + " at (" + fmt17(a.real()) + "," +
                          fmt17(a.imag()) + ")");
    const cplx sep = atom.z - atom.w;
    sum += atom.weight * sep / (dz * dw * std::pow(std::abs(sep), alpha));
  }
  return sum / kPi;
}

double dimensionless_value(const PotentialSpec& spec, const ProductMeasure& mu,
                           cplx a) {
  const double lever = std::pow(std::abs(a - spec.base), spec.dimensionless_exponent());
  switch (spec.kind) {
    case PotentialKind::Double:
      return lever * weighted_potential(mu, spec.s, spec.t, 0.0, a);
    case PotentialKind::Refined:
      return lever * weighted_potential(mu, spec.s, spec.t, spec.u, a);
    case PotentialKind::HTilde:
      return lever * h_tilde(mu, spec.alpha, a);
    case PotentialKind::HKernel:
      try {
        return lever * std::abs(h_kernel(mu, spec.alpha, a));
      } catch (const numeric_error&) {
        return kInf;  // atom collision; classified undefined on grids
      }
    default:
      throw validation_error("single kind takes a point measure");
  }
}

double dimensionless_value(const PotentialSpec& spec, const DiscreteMeasure& mu,
                           cplx a) {
  if (spec.kind != PotentialKind::Single)
    throw validation_error("product kinds take a product measure");
  return std::pow(std::abs(a - spec.base), spec.s) * riesz_potential(mu, spec.s, a);
}

std::vector<cplx> GridSpec::points() const {
  // (sqrt2-1)/4 and (sqrt3-1)/4 of a pitch; irrational offsets keep grid
  // nodes off atom coordinates.
  const double jx = pitch * 0.10355339059327376;
  const double jy = pitch * 0.18301270189221933;
  const long cells = static_cast<long>(std::floor(half_extent / pitch));
  std::vector<cplx> out;
  out.reserve(static_cast<size_t>(4 * cells * cells));
  for (long i = -cells; i < cells; ++i)
    for (long j = -cells; j < cells; ++j)
      out.push_back(center + cplx(jx + (i + 0.5) * pitch, jy + (j + 0.5) * pitch));
  return out;
}

std::string ExceptionalSetReport::csv() const {
  std::string out = "x,y,value,in_set\n";
  for (const Row& row : rows) {
    const char* flag = row.cls == PointClass::InSet
                           ? "1"
                           : (row.cls == PointClass::OutOfSet ? "0" : "-1");
    out += fmt17(row.a.real()) + "," + fmt17(row.a.imag()) + "," +
           fmt17(row.value) + "," + flag + "\n";
  }
  return out;
}

std::string ExceptionalSetReport::json_summary() const {
  nlohmann::json j;
  j["kind"] = spec.kind_name();
  j["s"] = spec.s;
  j["t"] = spec.t;
  j["u"] = spec.u;
  j["alpha"] = spec.alpha;
  j["base"] = {spec.base.real(), spec.base.imag()};
  j["threshold"] = spec.threshold;
  j["polarity"] =
      spec.polarity() == SetPolarity::LargeIsInSet ? "large-is-in-set" : "small-is-in-set";
  j["dimensionless_exponent"] = spec.dimensionless_exponent();
  j["hypothesis_violations"] = hypothesis_violations;
  size_t in = 0, undef = 0;
  for (const Row& row : rows) {
    if (row.cls == PointClass::InSet) ++in;
    if (row.cls == PointClass::Undefined) ++undef;
  }
  j["grid_points"] = rows.size();
  j["in_set"] = in;
  j["undefined"] = undef;
  nlohmann::json prof = nlohmann::json::array();
  for (const DensityEntry& e : profile.entries)
    prof.push_back({{"n", e.n},
                    {"fraction", e.fraction},
                    {"stderr", e.std_error},
                    {"samples", e.samples},
                    {"inconclusive", e.inconclusive}});
  j["density_profile"] = std::move(prof);
  return j.dump(2);
}

namespace {

template <typename Value>
ExceptionalSetReport classify_impl(const PotentialSpec& spec, const GridSpec& grid,
                                   const ExceptionalParams& params,
                                   std::vector<std::string> violations,
                                   Value&& value_at) {
  ExceptionalSetReport report;
  report.spec = spec;
  report.grid = grid;
  report.hypothesis_violations = std::move(violations);
  const bool large = spec.polarity() == SetPolarity::LargeIsInSet;

  for (const cplx& a : grid.points()) {
    ExceptionalSetReport::Row row;
    row.a = a;
    row.value = value_at(a);
    if (std::isnan(row.value)) {
      row.cls = PointClass::Undefined;
    } else if (std::isinf(row.value)) {
      // A collision between a grid node and an atom coordinate.
      row.cls = PointClass::Undefined;
    } else {
      const bool in_set =
          large ? row.value >= spec.threshold : row.value < spec.threshold;
      row.cls = in_set ? PointClass::InSet : PointClass::OutOfSet;
    }
    report.rows.push_back(row);
  }

  const auto indicator = [&](cplx a) {
    const double v = value_at(a);
    return large ? v >= spec.threshold : v < spec.threshold;
  };
  report.profile =
      area_density_profile(indicator, spec.base, params.profile_n_max, params.sampler);
  return report;
}

}  // namespace

ExceptionalSetReport classify_exceptional_set(const PotentialSpec& spec,
                                              const DiscreteMeasure& mu,
                                              const GridSpec& grid,
                                              const ExceptionalParams& params) {
  spec.validate();
  if (spec.kind != PotentialKind::Single)
    throw validation_error("point-measure classification is for the single kind");
  std::vector<std::string> violations;
  for (const DiscreteMeasure::Atom& atom : mu.atoms)
    if (atom.location == spec.base) {
      violations.push_back("measure has mass at the base point");
      break;
    }
  return classify_impl(spec, grid, params, std::move(violations),
                       [&](cplx a) { return dimensionless_value(spec, mu, a); });
}

ExceptionalSetReport classify_exceptional_set(const PotentialSpec& spec,
                                              const ProductMeasure& mu,
                                              const GridSpec& grid,
                                              const ExceptionalParams& params) {
  spec.validate();
  if (spec.kind == PotentialKind::Single)
    throw validation_error("single kind takes a point measure");
  std::vector<std::string> violations;
  const bool slice_free_required =
      spec.kind == PotentialKind::Double || spec.kind == PotentialKind::Refined;
  bool slice = false, corner = false;
  for (const ProductMeasure::Atom& atom : mu.atoms) {
    if (atom.z == spec.base || atom.w == spec.base) slice = true;
    if (atom.z == spec.base && atom.w == spec.base) corner = true;
  }
  if (slice_free_required && slice)
    violations.push_back("measure has mass on a coordinate slice through the base point");
  if (!slice_free_required && corner)
    violations.push_back("measure has mass at (base,base)");
  return classify_impl(spec, grid, params, std::move(violations),
                       [&](cplx a) { return dimensionless_value(spec, mu, a); });
}

double default_m_threshold(const ProductMeasure& mu) {
  return 6.0 * mu.total_variation();
}

}  // namespace ptk
