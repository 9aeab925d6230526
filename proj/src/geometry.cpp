// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Antenna-array layout and near-field geometric helpers.

#include "nfler/geometry.hpp"

#include <cmath>

namespace nfler {

void validate(const ArrayGeometry& geom) {
  if (geom.n_antennas < 1) {
    throw std::invalid_argument("ArrayGeometry: n_antennas must be >= 1");
  }
  if (!(geom.spacing > 0.0) || !std::isfinite(geom.spacing)) {
    throw std::invalid_argument("ArrayGeometry: spacing must be positive and finite");
  }
  if (!std::isfinite(geom.center.x) || !std::isfinite(geom.center.y) ||
      !std::isfinite(geom.axis.x) || !std::isfinite(geom.axis.y)) {
    throw std::invalid_argument("ArrayGeometry: non-finite coordinates");
  }
  const double axis_norm = std::hypot(geom.axis.x, geom.axis.y);
  if (std::abs(axis_norm - 1.0) > 1e-12) {
    throw std::invalid_argument("ArrayGeometry: axis must be a unit vector");
  }
}

std::vector<Point2D> antenna_positions(const ArrayGeometry& geom) {
  validate(geom);
  const arma::uword n = geom.n_antennas;
  std::vector<Point2D> pos(n);
  const double mid = 0.5 * static_cast<double>(n - 1);
  for (arma::uword i = 0; i < n; ++i) {
    const double offset = (static_cast<double>(i) - mid) * geom.spacing;
    pos[i] = {geom.center.x + offset * geom.axis.x,
              geom.center.y + offset * geom.axis.y};
  }
  return pos;
}

double aperture(const ArrayGeometry& geom) {
  validate(geom);
  return static_cast<double>(geom.n_antennas - 1) * geom.spacing;
}

double fraunhofer_distance(const ArrayGeometry& geom) {
  validate(geom);
  if (geom.n_antennas < 2) {
    throw DegenerateArrayError(
        "fraunhofer_distance: array with N < 2 has no aperture");
  }
  const double d = aperture(geom);
  return 2.0 * d * d;
}

}  // namespace nfler
