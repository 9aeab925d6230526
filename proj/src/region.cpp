// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// LER rectangle and endpoint-inclusive sampling grids.

#include "nfler/region.hpp"

#include <cmath>

namespace nfler {

void validate(const RectRegion& region) {
  if (!std::isfinite(region.x_min) || !std::isfinite(region.x_max) ||
      !std::isfinite(region.y_min) || !std::isfinite(region.y_max)) {
    throw std::invalid_argument("RectRegion: non-finite bounds");
  }
  if (!(region.x_min < region.x_max) || !(region.y_min < region.y_max)) {
    throw std::invalid_argument("RectRegion: requires x_min < x_max and y_min < y_max");
  }
}

namespace {

// floor((max-min)/step) + 1 with a relative guard so that exact multiples do
// not lose the endpoint to floating-point rounding.
arma::uword axis_count(double lo, double hi, double step) {
  const double ratio = (hi - lo) / step;
  return static_cast<arma::uword>(std::floor(ratio + 1e-9)) + 1;
}

}  // namespace

SampledRegion sample_region(const RectRegion& region, double step) {
  validate(region);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("sample_region: step must be positive");
  }
  const double side_x = region.x_max - region.x_min;
  const double side_y = region.y_max - region.y_min;
  if (step > side_x || step > side_y) {
    throw std::invalid_argument("sample_region: step larger than a region side");
  }

  SampledRegion out;
  out.region = region;
  out.step = step;
  out.nx = axis_count(region.x_min, region.x_max, step);
  out.ny = axis_count(region.y_min, region.y_max, step);
  out.points.reserve(static_cast<std::size_t>(out.nx) * out.ny);
  for (arma::uword ix = 0; ix < out.nx; ++ix) {
    const double x = region.x_min + static_cast<double>(ix) * step;
    for (arma::uword iy = 0; iy < out.ny; ++iy) {
      const double y = region.y_min + static_cast<double>(iy) * step;
      out.points.push_back({x, y});
    }
  }
  return out;
}

RectRegion default_scenario_region() { return RectRegion{2000.0, 2500.0, 0.0, 500.0}; }

}  // namespace nfler
