#pragma once

#include <cstddef>
#include <functional>

#include "alt/oracle.hpp"

namespace alt {

struct BandSolution {
  double t = 0.0;          // centre of the located Equal band (or of the final bracket)
  double lower_edge = 0.0;
  double upper_edge = 0.0;
  bool hit_equal = false;  // false: bracket shrank below tol without an Equal reading
  std::size_t evaluations = 0;
};

// Locates where `side` switches from Less to Greater on [lo, hi].
//
// side(lo) must not be Greater and side(hi) must not be Less. Once an Equal
// reading is found, both edges of the Equal band are bisected to `tol` and the
// band centre is returned; with a locally linear score this is the exact
// crossing, independent of the oracle's equality tolerance.
BandSolution bisect_band(const std::function<Intensity(double)>& side, double lo, double hi, double tol);

}  // namespace alt
