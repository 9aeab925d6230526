// SPDX-License-Identifier: Apache-2.0
//
// nfler -- test support: independently coded oracles and seeded random
// instance builders.  The oracles deliberately re-derive quantities through
// a second route (naive loops, the Gram-inverse projector, random search
// over the unit ball) so library results are checked against an
// implementation they share no code with.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <armadillo>

#include "nfler/field.hpp"
#include "nfler/geometry.hpp"
#include "nfler/region.hpp"

namespace oracle {

// |w^H a|^2 accumulated entry by entry, no BLAS.
inline double naive_received_power(const arma::cx_vec& w, const arma::cx_vec& a) {
  std::complex<double> acc = 0.0;
  for (arma::uword i = 0; i < w.n_elem; ++i) acc += std::conj(w(i)) * a(i);
  return std::norm(acc);
}

// Steering entries recomputed from scratch with scalar arithmetic.
inline arma::cx_vec naive_steering(const nfler::ArrayGeometry& geom,
                                   const nfler::Point2D& r) {
  const std::vector<nfler::Point2D> pos = nfler::antenna_positions(geom);
  const double scale = 1.0 / std::sqrt(static_cast<double>(pos.size()));
  arma::cx_vec a(pos.size());
  for (std::size_t n = 0; n < pos.size(); ++n) {
    const double dx = r.x - pos[n].x;
    const double dy = r.y - pos[n].y;
    const double phase = -2.0 * arma::datum::pi * std::sqrt(dx * dx + dy * dy);
    a(n) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

// Pi_A v = A (A^H A)^{-1} A^H v; valid when A has full column rank (Q <= N).
inline arma::cx_vec gram_projector_apply(const arma::cx_mat& A,
                                         const arma::cx_vec& v) {
  return A * arma::solve(A.t() * A, A.t() * v);
}

inline double randu(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline arma::uword randi(std::mt19937_64& rng, arma::uword lo, arma::uword hi) {
  return std::uniform_int_distribution<arma::uword>(lo, hi)(rng);
}

inline arma::cx_vec randn_cx_vec(std::mt19937_64& rng, arma::uword n) {
  std::normal_distribution<double> g(0.0, 1.0);
  arma::cx_vec v(n);
  for (arma::uword i = 0; i < n; ++i) v(i) = std::complex<double>(g(rng), g(rng));
  return v;
}

// Random rank-k complex matrix scaled to roughly unit column norms.
inline arma::cx_mat random_rank_k(std::mt19937_64& rng, arma::uword n,
                                  arma::uword q, arma::uword k, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  arma::cx_mat X(n, k), Y(k, q);
  for (auto& v : X) v = std::complex<double>(g(rng), g(rng));
  for (auto& v : Y) v = std::complex<double>(g(rng), g(rng));
  arma::cx_mat M = X * Y;
  const double nrm = arma::norm(M, "fro");
  if (nrm > 0.0) M *= scale / nrm;
  return M;
}

// Small near-field instance: a short ULA, constraint points spread over a
// rectangle in its radiating near field, and a user outside that rectangle.
// With q >= n the steering matrix is numerically full rank (rank n); with
// q < n it has full column rank q.
struct SmallInstance {
  nfler::ArrayGeometry geom;
  nfler::RectRegion region;
  std::vector<nfler::Point2D> points;  // constraint positions (size q)
  nfler::Point2D user;
  nfler::SteeringMatrix A;
  nfler::SteeringVector a_us;
};

inline SmallInstance random_instance(std::mt19937_64& rng, arma::uword n,
                                     arma::uword q) {
  SmallInstance inst;
  inst.geom.n_antennas = n;
  inst.geom.spacing = 0.5;
  inst.geom.axis = {0.0, 1.0};
  inst.geom.center = {0.0, 0.0};
  const double d = nfler::aperture(inst.geom) + 0.5;
  // A wide angular footprint close to the array keeps the spectrum healthy.
  inst.region.x_min = randu(rng, 1.5 * d, 2.5 * d);
  inst.region.x_max = inst.region.x_min + randu(rng, 1.5 * d, 3.0 * d);
  inst.region.y_min = randu(rng, -2.0 * d, -1.0 * d);
  inst.region.y_max = randu(rng, 1.0 * d, 2.0 * d);
  inst.points.reserve(q);
  while (inst.points.size() < q) {
    const nfler::Point2D p{randu(rng, inst.region.x_min, inst.region.x_max),
                           randu(rng, inst.region.y_min, inst.region.y_max)};
    bool ok = true;
    for (const auto& other : inst.points) {
      const double dx = p.x - other.x;
      const double dy = p.y - other.y;
      if (dx * dx + dy * dy < 0.25 * 0.25) {
        ok = false;
        break;
      }
    }
    if (ok) inst.points.push_back(p);
  }
  // User beyond the region in x, offset in y.
  inst.user = {inst.region.x_max + randu(rng, 0.5 * d, 1.5 * d),
               randu(rng, inst.region.y_max + 0.5 * d, inst.region.y_max + 2.0 * d)};
  inst.A = nfler::steering_matrix(inst.geom, inst.points);
  inst.a_us = nfler::steering_vector(inst.geom, inst.user);
  return inst;
}

// Random-search-plus-polish optimum of
//   maximize Re{w^H a_us}  s.t.  |w^H a_q|^2 <= t,  ||w|| <= 1.
// The global phase is canonicalized (constraints depend on moduli only), so
// the objective of any feasible w is |w^H a_us|.  The polish is a shrinking
// random-step hill climb with rescaling onto the feasible set; the problem
// is convex, so the local refinement converges to the global optimum.
struct SocpOracleResult {
  double objective = 0.0;
  arma::cx_vec w;
};

inline SocpOracleResult socp_random_search_polish(const arma::cx_mat& A,
                                                  const arma::cx_vec& a_us,
                                                  double t, std::mt19937_64& rng,
                                                  std::size_t n_samples = 10'000'000,
                                                  std::size_t n_polish = 60'000) {
  const arma::uword n = a_us.n_elem;
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double sqrt_t = std::sqrt(t);

  // Scale w onto the feasible set: unit ball and every |w^H a_q| <= sqrt(t).
  const auto clip_feasible = [&](arma::cx_vec w) -> arma::cx_vec {
    const double nrm = arma::norm(w);
    if (nrm > 1.0) w /= nrm;
    double worst = 0.0;
    for (arma::uword q = 0; q < A.n_cols; ++q) {
      worst = std::max(worst, std::abs(arma::cdot(w, A.col(q))));
    }
    if (worst > sqrt_t) w *= sqrt_t / worst;
    return w;
  };
  const auto objective = [&](const arma::cx_vec& w) {
    return std::abs(arma::cdot(w, a_us));
  };

  arma::cx_vec best(n, arma::fill::zeros);
  double best_obj = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    arma::cx_vec w(n);
    for (arma::uword i = 0; i < n; ++i) w(i) = std::complex<double>(g(rng), g(rng));
    // Uniform radius in the 2n-dimensional real ball.
    const double radius = std::pow(u01(rng), 1.0 / (2.0 * static_cast<double>(n)));
    w *= radius / arma::norm(w);
    bool feasible = true;
    for (arma::uword q = 0; q < A.n_cols; ++q) {
      if (std::norm(arma::cdot(w, A.col(q))) > t) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    const double obj = objective(w);
    if (obj > best_obj) {
      best_obj = obj;
      best = w;
    }
  }

  double step = 0.3;
  for (std::size_t it = 0; it < n_polish; ++it) {
    arma::cx_vec w = best;
    for (arma::uword i = 0; i < n; ++i) {
      w(i) += step * std::complex<double>(g(rng), g(rng));
    }
    w = clip_feasible(w);
    const double obj = objective(w);
    if (obj > best_obj) {
      best_obj = obj;
      best = w;
    }
    if (it % 1000 == 999) step = std::max(step * 0.7, 1e-9);
  }

  SocpOracleResult out;
  out.objective = best_obj;
  const std::complex<double> inner = arma::cdot(best, a_us);
  const double mag = std::abs(inner);
  out.w = (mag > 0.0) ? arma::cx_vec(best * (inner / mag)) : best;
  return out;
}

}  // namespace oracle
