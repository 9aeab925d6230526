// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Dense grid power kernel.  Compiled with relaxed math so the compiler can
// vectorize sqrt/sin/cos (libmvec); every point is computed independently,
// so results do not depend on evaluation order or thread count.

#include "nfler/field.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstddef>

namespace nfler::detail {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void grid_powers_kernel(const double* ax, const double* ay, const double* wr,
                        const double* wi, arma::uword n_antennas, const Point2D* pts,
                        arma::uword n_points, double* out_power, double* out_min_dist2) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_antennas);
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(n_points);
  const double inv_n = 1.0 / static_cast<double>(n_antennas);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    const double px = pts[p].x;
    const double py = pts[p].y;
    double acc_re = 0.0;
    double acc_im = 0.0;
    double min_d2 = 1e300;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double dx = px - ax[i];
      const double dy = py - ay[i];
      const double d2 = dx * dx + dy * dy;
      min_d2 = d2 < min_d2 ? d2 : min_d2;
      const double phi = kTwoPi * std::sqrt(d2);
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      // conj(w) * exp(-j*phi): accumulate w^H a without the 1/sqrt(N) factor.
      acc_re += wr[i] * c - wi[i] * s;
      acc_im -= wr[i] * s + wi[i] * c;
    }
    out_power[p] = (acc_re * acc_re + acc_im * acc_im) * inv_n;
    out_min_dist2[p] = min_d2;
  }
}

}  // namespace nfler::detail
