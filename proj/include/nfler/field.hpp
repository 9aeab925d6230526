// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Near-field steering vectors, steering matrices and received powers.
// Entry n of a steering vector is (1/sqrt(N)) * exp(-j*2*pi*||r - x_n||),
// using the exact spherical-wave distance (no Fresnel approximation).

#pragma once

#include <vector>

#include <armadillo>

#include "nfler/geometry.hpp"

namespace nfler {

// Unit-norm steering vector; every entry has magnitude 1/sqrt(N).
struct SteeringVector {
  arma::cx_vec entries;
};

// N x Q matrix whose column q is the steering vector of point q.
struct SteeringMatrix {
  arma::cx_mat columns;
};

// Power floor used when converting to dB so CSV output stays finite.
inline constexpr double kDbFloor = -400.0;

// 10*log10(p) clamped below at kDbFloor (p <= 0 maps to the floor).
double power_db(double p);

// Throws SingularGeometryError when r coincides with an antenna
// (distance <= 1e-9 lambda).
SteeringVector steering_vector(const ArrayGeometry& geom, const Point2D& r);

// Column q = steering_vector(points[q]); propagates singular-geometry errors
// with the offending point index.
SteeringMatrix steering_matrix(const ArrayGeometry& geom,
                               const std::vector<Point2D>& points);

// |w^H a|^2.  Throws std::invalid_argument on dimension mismatch.
double received_power(const arma::cx_vec& w, const SteeringVector& a);

// |w^H a(r)|^2 for every point, in point order.  Uses the vectorized
// trigonometric kernel; each point's value is independent of evaluation
// order and thread count.  Throws SingularGeometryError if a point
// coincides with an antenna.
arma::vec point_powers(const arma::cx_vec& w, const ArrayGeometry& geom,
                       const std::vector<Point2D>& points);

// Beam pattern in dB relative to MRT (steering vectors are unit norm, so the
// MRT reference is exactly 0 dB).  Requires unit-norm w (within 1e-9).
arma::vec beam_pattern_db(const arma::cx_vec& w, const ArrayGeometry& geom,
                          const std::vector<Point2D>& points);

namespace detail {
// Relaxed-math translation unit: powers plus squared distance to the nearest
// antenna per point (for singular-geometry detection by the caller).
void grid_powers_kernel(const double* ax, const double* ay, const double* wr,
                        const double* wi, arma::uword n_antennas,
                        const Point2D* pts, arma::uword n_points, double* out_power,
                        double* out_min_dist2);
}  // namespace detail

}  // namespace nfler
