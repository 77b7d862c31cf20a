#pragma once
// Helpers for writing o1(5) entries in E5-antisymmetric pairs, so built forms
// lie in the algebra exactly rather than to rounding.
#include "isoflat/minkowski.hpp"

namespace isoflat::detail {

/// Entry of the o(3) block: m(r,c) = v, m(c,r) = -v.
inline void set_rotation(Mat5& m, int r, int c, double v) {
  m(r, c) = v;
  m(c, r) = -v;
}

/// Entry of the off-diagonal blocks, r in {0,1,2} and c in {3,4}; the
/// partner sits in the row paired with c.
inline void set_boost(Mat5& m, int r, int c, double v) {
  m(r, c) = v;
  m(7 - c, r) = -v;
}

/// o1(2) block diag(v, -v).
inline void set_light_cone_scaling(Mat5& m, double v) {
  m(3, 3) = v;
  m(4, 4) = -v;
}

}  // namespace isoflat::detail
