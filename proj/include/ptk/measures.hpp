#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

// Finite atomic complex measure on the plane. Duplicate locations are
// permitted; normalized() merges them.
struct DiscreteMeasure {
  struct Atom {
    cplx location;
    cplx weight;
  };
  std::vector<Atom> atoms;

  double total_variation() const;
  DiscreteMeasure normalized() const;  // merge duplicates, drop zero weights

  std::string to_json() const;  // array of [x_re,x_im,c_re,c_im]
  static DiscreteMeasure from_json(const std::string& text);
};

// Finite atomic complex measure on the product plane x plane.
struct ProductMeasure {
  struct Atom {
    cplx z;
    cplx w;
    cplx weight;
  };
  std::vector<Atom> atoms;

  double total_variation() const;
  ProductMeasure normalized() const;
  bool has_diagonal_atom() const;  // any atom with z == w
  ProductMeasure abs() const;      // weights replaced by |weight|

  std::string to_json() const;  // array of [z_re,z_im,w_re,w_im,c_re,c_im]
  static ProductMeasure from_json(const std::string& text);
};

// Atom ((z,w),c) -> ((w,z),c). Involution, preserves total variation.
ProductMeasure swap_pushforward(const ProductMeasure& mu);

// Atom ((z,w),c) contributes (z,c), or (z,|c|) when use_total_variation is
// set. Duplicates merged.
DiscreteMeasure marginal_first(const ProductMeasure& mu,
                               bool use_total_variation = false);

// Marginal over the second coordinate, via the swap involution.
DiscreteMeasure marginal_second(const ProductMeasure& mu,
                                bool use_total_variation = false);

// Keeps atoms with predicate true, weights unchanged.
ProductMeasure restrict(const ProductMeasure& mu,
                        const std::function<bool(cplx, cplx)>& region);

// Moves every atom on the vertical slice {z == b} to the swapped position
// with negated weight, so the result carries no mass on the slice while the
// induced bilinear functional is unchanged. Requires no diagonal atoms.
ProductMeasure avoid_vertical_slice(const ProductMeasure& mu, cplx b);

}  // namespace ptk
