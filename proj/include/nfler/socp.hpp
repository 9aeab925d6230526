// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Exact convex baseline: the phase-invariant SOCP
//
//   maximize   Re{w^H a_us}
//   subject to |w^H a_q| <= sqrt(t)  for every sampled LER point q,
//              Im{w^H a_us} = 0,  Re{w^H a_us} >= 0,  ||w||_2 <= 1,
//
// solved with a homogeneous self-dual primal-dual interior-point method
// (Nesterov-Todd scaling, Mehrotra predictor-corrector) on the problem
// lifted to 2N real variables with the equality eliminated by a Householder
// nullspace basis.
//
// JSON schema (complex arrays are interleaved [re0, im0, re1, im1, ...]):
//   problem:  { "n_antennas": N, "n_constraints": Q, "t_linear": t,
//               "a_us": [2N numbers], "A_cols": [[2N numbers] x Q] }
//   solution: { "weights": [2N numbers], "objective": x, "duality_gap": x,
//               "max_constraint_violation": x, "iterations": n,
//               "wall_time_seconds": x, "status": "optimal|...",
//               "primal_residual": x, "dual_residual": x,
//               "warm_started": bool,
//               "certificate": { "x": [...], "s": [...], "z": [...] } }

#pragma once

#include <atomic>
#include <map>
#include <string>

#include <armadillo>

#include "json.hpp"

#include "nfler/field.hpp"

namespace nfler {

struct SocpProblem {
  arma::cx_mat A;       // N x Q steering matrix of the sampled LER
  arma::cx_vec a_us;    // unit-norm user steering vector
  double t_linear = 0;  // power threshold, linear scale (> 0)
};

struct SocpOptions {
  double tol = 1e-8;                        // pres/dres/relgap target
  arma::uword max_iters = 100;
  double time_budget_seconds = 0.0;         // 0 = unlimited
  const std::atomic<bool>* cancel = nullptr;  // polled between iterations
  const arma::cx_vec* warm_start = nullptr;   // optional initial w
};

struct SocpSolution {
  arma::cx_vec weights;             // snapped to unit norm when the ball binds
  double objective = 0.0;           // Re{w^H a_us}
  double duality_gap = 0.0;         // relative duality gap
  double max_constraint_violation = 0.0;  // max(0, max_q |w^H a_q| - sqrt(t))
  arma::uword iterations = 0;
  double wall_time_seconds = 0.0;
  std::string status;               // optimal | max_iter | stalled |
                                    // time_budget | cancelled | primal_infeasible
  double primal_residual = 0.0;     // solver-normalized residuals
  double dual_residual = 0.0;
  bool warm_started = false;
  // Conic certificate in the eliminated coordinates (x: primal, s: slack,
  // z: dual), already normalized by tau; kept for KKT certification.
  arma::vec x, s, z;
};

// Solves the SOCP above.  t_linear <= 0 is rejected with
// std::invalid_argument (t = 0 is ZF territory).  When the MRT precoder is
// already feasible (max_q |a_us^H a_q|^2 <= t) the exact analytic optimum
// w = a_us is returned with a hand-built dual certificate.
SocpSolution solve_p2(const SocpProblem& problem, const SocpOptions& opts = {});

// Residuals recomputed from the reported weights (primal side) and the
// stored dual certificate: keys "primal", "dual", "complementary".
// All <= 1e-6 for accepted solutions.
std::map<std::string, double> kkt_residuals(const SocpProblem& problem,
                                            const SocpSolution& solution);

nlohmann::json to_json(const SocpProblem& problem);
nlohmann::json to_json(const SocpSolution& solution);
SocpProblem socp_problem_from_json(const nlohmann::json& j);

}  // namespace nfler
