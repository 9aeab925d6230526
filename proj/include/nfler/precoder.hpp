// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Precoder constructions: MRT, ZF (nullspace projection), DoSP (dominant
// subspace projection with decreasing k-search) and a ridge baseline.
// All returned weight vectors are unit norm.

#pragma once

#include <map>
#include <optional>
#include <string>

#include <armadillo>

#include "nfler/subspace.hpp"

namespace nfler {

enum class Method { MRT, ZF, DoSP, Ridge, SOCP };

std::string to_string(Method m);
// Accepts lower-case names: mrt, zf, dosp, ridge, socp.  Throws ConfigError.
Method method_from_string(const std::string& name);

// Power threshold t relative to the MRT user power (which is exactly 1).
struct ThresholdSpec {
  double t_db_rel_mrt = -80.0;
  double t_linear = 1e-8;

  static ThresholdSpec from_db(double t_db);
};

struct PrecoderResult {
  arma::cx_vec weights;                    // unit norm within 1e-12
  Method method = Method::MRT;
  std::optional<arma::uword> k_used;       // DoSP only
  std::map<std::string, double> diagnostics;
};

// w = a_us; user power exactly 1 (the 0 dB reference).
PrecoderResult mrt(const SteeringVector& a_us);

// w = (I - Pi_A) a_us, normalized; Pi_A projects onto the column space of A.
// Steering matrices with Q >= N are full rank in practice, so that case (and
// any case with ||(I - Pi_A) a_us|| <= 1e-8) raises NullProjectionError.
PrecoderResult zf(const SteeringMatrix& A, const SteeringVector& a_us);

// Decreasing k-search from k_init: returns the smallest k such that the
// sampled-grid constraint max_q |w_k^H a_q|^2 <= t*(1+1e-9) holds at k and is
// violated at k-1 (k = 0 means the threshold never binds and MRT is
// returned).  Throws InfeasibleError when k_init itself violates the
// constraint.  Diagnostics: k_init, k_opt, iterations, user_power,
// grid_max_power, threshold_t.
PrecoderResult dosp(const SubspaceBasis& basis, const ThresholdSpec& threshold,
                    const SteeringMatrix& A);

// w ~ (mu I + A A^H)^{-1} a_us with mu chosen by bisection on log(mu) so the
// sampled-grid max power lands in [0.99 t, t] (feasible side).  If even the
// MRT limit satisfies the threshold, the near-MRT solution is returned with
// diagnostics["threshold_inactive"] = 1.  Throws InfeasibleError when no
// bracket exists or the bisection fails after 200 iterations.
// Not part of the referenced method family; reported for comparison only.
PrecoderResult ridge_baseline(const SteeringMatrix& A, const SteeringVector& a_us,
                              const ThresholdSpec& threshold);

namespace detail {
// DoSP search used by both the public precoder and the achievable-power map
// (the basis depends only on A, so per-user data is passed explicitly).
PrecoderResult dosp_search(const SubspaceBasis& basis, const arma::cx_vec& a_user,
                           const arma::cx_vec& c_user, const ThresholdSpec& threshold,
                           const SteeringMatrix& A);
}  // namespace detail

}  // namespace nfler
