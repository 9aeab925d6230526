// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Dominant subspace of the LER steering matrix via eigendecomposition of the
// Gram matrix A*A^H, plus the closed-form user/LER powers of the projected
// precoder.

#pragma once

#include <armadillo>

#include "nfler/field.hpp"

namespace nfler {

// Truncated SVD factors of A (A ~= B * diag(sigma) * V^H), ordered by
// decreasing singular value; ties keep ascending original eigen-index.
struct SubspaceBasis {
  arma::cx_mat left_vectors;    // N x r, orthonormal columns b_j
  arma::vec singular_values;    // r, non-increasing, sigma_1 > 0
  arma::cx_mat right_vectors;   // Q x r, columns v_j = A^H b_j / sigma_j
  arma::uword k_init = 0;       // #{ sigma_j > sigma_th }
  arma::cx_vec user_coeffs;     // c_j = b_j^H a_us
  arma::cx_vec user_vector;     // a_us itself (kept for projections)
  double sigma_th = 0.0;        // absolute threshold sigma_th_rel * sigma_1
  double sigma_th_rel = 1e-10;
};

// r = min(N, Q).  The SVD is obtained from the N x N Gram matrix in two
// stages: a first eigendecomposition resolves the dominant part of the
// spectrum; the trailing part is re-resolved on the deflated residual
// R = A - B1 B1^H A so that singular values far below sqrt(eps)*sigma_1 are
// not drowned by the Gram matrix's eps*sigma_1^2 eigenvalue noise floor.
// Throws std::runtime_error for a numerically zero A.
SubspaceBasis compute_basis(const SteeringMatrix& A, const SteeringVector& a_us,
                            double sigma_th_rel = 1e-10);

// a_proj = a_us - sum_{j<k} (b_j^H a_us) b_j (not normalized).
// Throws std::invalid_argument for k out of [0, r].
arma::cx_vec project_out(const SteeringVector& a_us, const SubspaceBasis& basis,
                         arma::uword k);

// 1 - sum_{j<k} |c_j|^2 == |w_S^H a_us|^2 for w_S = a_proj/||a_proj||.
// Throws DegenerateSubspaceError when the value is <= 1e-14.
double user_power_closed_form(const SubspaceBasis& basis, arma::uword k);

// |sum_{j>=k} c_j^* sigma_j conj(V_{q,j})|^2 / (1 - sum_{j<k} |c_j|^2).
// Exact only in the full-rank regime r = N; throws std::invalid_argument
// otherwise (or for an out-of-range q), DegenerateSubspaceError on a
// vanishing denominator.
double ler_power_closed_form(const SubspaceBasis& basis, arma::uword k,
                             arma::uword q);

}  // namespace nfler
