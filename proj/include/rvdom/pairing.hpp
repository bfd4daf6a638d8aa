#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rvdom/dyadic.hpp"

namespace rvdom {

enum class PairingKind { interleave, hilbert };
enum class PairingRole { full_h, h1, h2 };

struct PairingDescriptor {
  PairingKind kind;
  PairingRole role;
};

// w_2i = x_i, w_2i+1 = y_i; requires |x| in {|y|, |y|+1}.
std::string interleave(const std::string& x, const std::string& y);
std::pair<std::string, std::string> deinterleave(const std::string& w);

// Exact affine map v -> M v + b on the unit square, dyadic entries.
struct AffineMap2 {
  Dyadic m00, m01, m10, m11, b0, b1;

  static AffineMap2 identity();
  // The four IFS maps: H0 scale+swap, H1/H2 translated scalings, H3 the
  // reflected copy into the lower right quadrant.
  static AffineMap2 hilbert_map(int digit);

  AffineMap2 then_inside(const AffineMap2& inner) const;  // this o inner
  std::pair<DyInterval, DyInterval> image_of_unit_square() const;
};

// The exact subsquare H_w0 H_w1 ... H_wk [0,1]^2.
std::pair<DyInterval, DyInterval> hilbert_cell(const std::string& quat_digits);
// Enclosure of h(omega) for all omega with the given quaternary prefix;
// identical to the cell, width 2^-|prefix| per coordinate.
std::pair<DyInterval, DyInterval> hilbert_point(const std::string& quat_prefix);

// All depth-i quaternary cells whose square lies inside the rectangle;
// corners must be multiples of 2^-i.
std::vector<std::string> hilbert_preimage(const DyInterval& xr, const DyInterval& yr, unsigned i);

// Coordinate projections at finite precision. Interleave: even/odd
// subsequence of a bit prefix. Hilbert: the longest binary prefix whose
// cylinder contains the cell's x (resp. y) interval.
std::string project(PairingRole role, PairingKind kind, const std::string& prefix);

// Longest binary prefix p with [a,b] inside [0.p, 0.p + 2^-|p|], |p| <= max_len.
std::string interval_to_prefix(const DyInterval& iv, unsigned max_len);

}  // namespace rvdom
