#include "ptk/measures.hpp"

#include <map>
#include <tuple>

#include "json.hpp"

namespace ptk {

double DiscreteMeasure::total_variation() const {
  double tv = 0.0;
  for (const Atom& a : atoms) tv += std::abs(a.weight);
  return tv;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  std::map<std::tuple<double, double>, size_t> index;
  DiscreteMeasure out;
  for (const Atom& a : atoms) {
    const auto key = std::make_tuple(a.location.real(), a.location.imag());
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.atoms.size());
      out.atoms.push_back(a);
    } else {
      out.atoms[it->second].weight += a.weight;
    }
  }
  std::erase_if(out.atoms, [](const Atom& a) { return a.weight == cplx(0.0, 0.0); });
  return out;
}

std::string DiscreteMeasure::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const Atom& a : atoms)
    j.push_back({a.location.real(), a.location.imag(), a.weight.real(),
                 a.weight.imag()});
  return j.dump();
}

DiscreteMeasure DiscreteMeasure::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DiscreteMeasure mu;
  for (const auto& row : j) {
    if (row.size() != 4) throw validation_error("discrete measure row needs 4 entries");
    mu.atoms.push_back(Atom{cplx(row[0].get<double>(), row[1].get<double>()),
                            cplx(row[2].get<double>(), row[3].get<double>())});
  }
  return mu;
}

double ProductMeasure::total_variation() const {
  double tv = 0.0;
  for (const Atom& a : atoms) tv += std::abs(a.weight);
  return tv;
}

ProductMeasure ProductMeasure::normalized() const {
  std::map<std::tuple<double, double, double, double>, size_t> index;
  ProductMeasure out;
  for (const Atom& a : atoms) {
    const auto key = std::make_tuple(a.z.real(), a.z.imag(), a.w.real(), a.w.imag());
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.atoms.size());
      out.atoms.push_back(a);
    } else {
      out.atoms[it->second].weight += a.weight;
    }
  }
  std::erase_if(out.atoms, [](const Atom& a) { return a.weight == cplx(0.0, 0.0); });
  return out;
}

bool ProductMeasure::has_diagonal_atom() const {
  for (const Atom& a : atoms)
    if (a.z == a.w) return true;
  return false;
}

ProductMeasure ProductMeasure::abs() const {
  ProductMeasure out = *this;
  for (Atom& a : out.atoms) a.weight = cplx(std::abs(a.weight), 0.0);
  return out;
}

std::string ProductMeasure::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const Atom& a : atoms)
    j.push_back({a.z.real(), a.z.imag(), a.w.real(), a.w.imag(),
                 a.weight.real(), a.weight.imag()});
  return j.dump();
}

ProductMeasure ProductMeasure::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ProductMeasure mu;
  for (const auto& row : j) {
    if (row.size() != 6) throw validation_error("product measure row needs 6 entries");
    mu.atoms.push_back(Atom{cplx(row[0].get<double>(), row[1].get<double>()),
                            cplx(row[2].get<double>(), row[3].get<double>()),
                            cplx(row[4].get<double>(), row[5].get<double>())});
  }
  return mu;
}

ProductMeasure swap_pushforward(const ProductMeasure& mu) {
  ProductMeasure out;
  out.atoms.reserve(mu.atoms.size());
  for (const ProductMeasure::Atom& a : mu.atoms)
    out.atoms.push_back({a.w, a.z, a.weight});
  return out;
}

DiscreteMeasure marginal_first(const ProductMeasure& mu, bool use_total_variation) {
  DiscreteMeasure out;
  out.atoms.reserve(mu.atoms.size());
  for (const ProductMeasure::Atom& a : mu.atoms)
    out.atoms.push_back(
        {a.z, use_total_variation ? cplx(std::abs(a.weight), 0.0) : a.weight});
  return out.normalized();
}

DiscreteMeasure marginal_second(const ProductMeasure& mu, bool use_total_variation) {
  return marginal_first(swap_pushforward(mu), use_total_variation);
}

ProductMeasure restrict(const ProductMeasure& mu,
                        const std::function<bool(cplx, cplx)>& region) {
  ProductMeasure out;
  for (const ProductMeasure::Atom& a : mu.atoms)
    if (region(a.z, a.w)) out.atoms.push_back(a);
  return out;
}

ProductMeasure avoid_vertical_slice(const ProductMeasure& mu, cplx b) {
  if (mu.has_diagonal_atom())
    throw validation_error("avoid_vertical_slice requires no diagonal mass");
  ProductMeasure out;
  out.atoms.reserve(mu.atoms.size());
  for (const ProductMeasure::Atom& a : mu.atoms) {
    if (a.z == b) {
      out.atoms.push_back({a.w, a.z, -a.weight});
    } else {
      out.atoms.push_back(a);
    }
  }
  return out;
}

}  // namespace ptk
