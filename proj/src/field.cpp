// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Steering vectors, steering matrices and received powers.

#include "nfler/field.hpp"

#include <cmath>
#include <complex>

namespace nfler {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kCoincidenceDist = 1e-9;  // lambda
}  // namespace

double power_db(double p) {
  if (!(p > 0.0)) return kDbFloor;
  return std::max(10.0 * std::log10(p), kDbFloor);
}

SteeringVector steering_vector(const ArrayGeometry& geom, const Point2D& r) {
  const std::vector<Point2D> pos = antenna_positions(geom);
  const arma::uword n = geom.n_antennas;
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  SteeringVector a;
  a.entries.set_size(n);
  for (arma::uword i = 0; i < n; ++i) {
    const double d = std::hypot(r.x - pos[i].x, r.y - pos[i].y);
    if (d <= kCoincidenceDist) {
      throw SingularGeometryError("steering_vector: position coincides with antenna " +
                                  std::to_string(i));
    }
    a.entries(i) = std::polar(amp, -kTwoPi * d);
  }
  return a;
}

SteeringMatrix steering_matrix(const ArrayGeometry& geom,
                               const std::vector<Point2D>& points) {
  if (points.empty()) {
    throw std::invalid_argument("steering_matrix: needs at least one point");
  }
  SteeringMatrix A;
  A.columns.set_size(geom.n_antennas, points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    try {
      A.columns.col(q) = steering_vector(geom, points[q]).entries;
    } catch (const SingularGeometryError& e) {
      throw SingularGeometryError("steering_matrix: point " + std::to_string(q) +
                                  ": " + e.what());
    }
  }
  return A;
}

double received_power(const arma::cx_vec& w, const SteeringVector& a) {
  if (w.n_elem != a.entries.n_elem) {
    throw std::invalid_argument("received_power: dimension mismatch");
  }
  const std::complex<double> ip = arma::cdot(w, a.entries);
  return std::norm(ip);
}

arma::vec point_powers(const arma::cx_vec& w, const ArrayGeometry& geom,
                       const std::vector<Point2D>& points) {
  validate(geom);
  if (w.n_elem != geom.n_antennas) {
    throw std::invalid_argument("point_powers: weight length != n_antennas");
  }
  const std::vector<Point2D> pos = antenna_positions(geom);
  const arma::uword n = geom.n_antennas;
  arma::vec ax(n), ay(n), wr(n), wi(n);
  for (arma::uword i = 0; i < n; ++i) {
    ax(i) = pos[i].x;
    ay(i) = pos[i].y;
    wr(i) = w(i).real();
    wi(i) = w(i).imag();
  }
  arma::vec powers(points.size());
  arma::vec min_d2(points.size());
  detail::grid_powers_kernel(ax.memptr(), ay.memptr(), wr.memptr(), wi.memptr(), n,
                             points.data(), points.size(), powers.memptr(),
                             min_d2.memptr());
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (min_d2(p) <= kCoincidenceDist * kCoincidenceDist) {
      throw SingularGeometryError("point_powers: point " + std::to_string(p) +
                                  " coincides with an antenna");
    }
  }
  return powers;
}

arma::vec beam_pattern_db(const arma::cx_vec& w, const ArrayGeometry& geom,
                          const std::vector<Point2D>& points) {
  if (std::abs(arma::norm(w) - 1.0) > 1e-9) {
    throw std::invalid_argument("beam_pattern_db: weights must be unit norm");
  }
  arma::vec p = point_powers(w, geom, points);
  arma::vec db(p.n_elem);
  for (arma::uword i = 0; i < p.n_elem; ++i) db(i) = power_db(p(i));
  return db;
}

}  // namespace nfler
