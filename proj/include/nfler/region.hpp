// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Rectangular low-exposure region (LER) and its endpoint-inclusive sampling
// grids (design step delta, fine verification step delta_c).

#pragma once

#include <vector>

#include <armadillo>

#include "nfler/geometry.hpp"

namespace nfler {

struct RectRegion {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

// Throws std::invalid_argument unless x_min < x_max and y_min < y_max.
void validate(const RectRegion& region);

// Endpoint-inclusive uniform grid over a rectangle.
struct SampledRegion {
  RectRegion region;
  double step = 0.0;
  arma::uword nx = 0;               // points along x
  arma::uword ny = 0;               // points along y
  std::vector<Point2D> points;      // row-major, y fastest
};

// Per axis, count = floor((max-min)/step) + 1; ordering is deterministic
// (x outer, y inner/fastest).  Throws std::invalid_argument for step <= 0 or
// step larger than a side.
SampledRegion sample_region(const RectRegion& region, double step);

// The default scenario LER: x in [2000, 2500], y in [0, 500] lambda.
RectRegion default_scenario_region();

}  // namespace nfler
