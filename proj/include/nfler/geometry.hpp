// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Antenna-array layout and basic near-field geometric quantities.
// All lengths are expressed in wavelengths, so results are frequency-independent.

#pragma once

#include <vector>

#include <armadillo>

#include "nfler/errors.hpp"

namespace nfler {

struct Point2D {
  double x = 0.0;  // lambda units
  double y = 0.0;  // lambda units
};

// Uniform linear array in the x-y plane.
struct ArrayGeometry {
  arma::uword n_antennas = 1000;
  double spacing = 0.5;        // inter-element spacing, lambda units
  Point2D axis{0.0, 1.0};      // unit direction of the line array
  Point2D center{0.0, 0.0};    // array midpoint, lambda units
};

// Throws std::invalid_argument on violated invariants (N >= 1, spacing > 0,
// unit axis, finite coordinates).
void validate(const ArrayGeometry& geom);

// Element n sits at center + (n - (N-1)/2) * spacing * axis, n = 0..N-1.
// Positions strictly increase along `axis` and are symmetric about `center`.
std::vector<Point2D> antenna_positions(const ArrayGeometry& geom);

// Aperture D = (N-1) * spacing, lambda units.
double aperture(const ArrayGeometry& geom);

// Fraunhofer distance 2*D^2 in lambda units (lambda = 1 normalization).
// Throws DegenerateArrayError for N < 2.
double fraunhofer_distance(const ArrayGeometry& geom);

}  // namespace nfler
