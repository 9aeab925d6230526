// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Dominant subspace of the LER steering matrix.
//
// The SVD of the wide matrix A (Q >> N) is computed from the N x N Gram
// matrix A*A^H.  A single eigendecomposition cannot resolve singular values
// below ~sqrt(eps)*sigma_1 (the Gram matrix carries eps*sigma_1^2 noise), so
// the trailing subspace is recomputed from the deflated residual
// R = A - B1*(B1^H A), whose Gram matrix has a noise floor proportional to
// the *residual* spectrum instead of sigma_1^2.  With the 1e-10*sigma_1
// truncation threshold sitting far below sqrt(eps)*sigma_1, this two-stage
// pass is what makes k_init well defined.

#include "nfler/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfler/errors.hpp"

namespace nfler {

namespace {

// Relative floor separating "resolved by the first Gram pass" from
// "needs the deflated pass" -- comfortably above sqrt(eps) ~ 1.5e-8.
constexpr double kStageOneRel = 3e-6;

// Descending eigen-order of a Hermitian matrix.
void eig_desc(const arma::cx_mat& G, arma::vec& eigval, arma::cx_mat& eigvec) {
  arma::cx_mat Gh = 0.5 * (G + G.t());
  if (!arma::eig_sym(eigval, eigvec, Gh)) {
    throw std::runtime_error("compute_basis: eigendecomposition failed");
  }
  eigval = arma::reverse(eigval);
  eigvec = arma::fliplr(eigvec);
}

}  // namespace

SubspaceBasis compute_basis(const SteeringMatrix& A, const SteeringVector& a_us,
                            double sigma_th_rel) {
  const arma::cx_mat& Am = A.columns;
  const arma::uword N = Am.n_rows;
  const arma::uword Q = Am.n_cols;
  if (Q < 1 || N < 1) {
    throw std::invalid_argument("compute_basis: empty steering matrix");
  }
  if (a_us.entries.n_elem != N) {
    throw std::invalid_argument("compute_basis: user vector dimension mismatch");
  }
  if (!(sigma_th_rel > 0.0)) {
    throw std::invalid_argument("compute_basis: sigma_th_rel must be positive");
  }
  const arma::uword r = std::min(N, Q);

  arma::vec ev1;
  arma::cx_mat U1;
  eig_desc(Am * Am.t(), ev1, U1);
  const double smax = std::sqrt(std::max(ev1(0), 0.0));
  if (!(smax > 0.0) || !std::isfinite(smax)) {
    throw std::runtime_error("compute_basis: numerically zero steering matrix");
  }

  arma::uword k1 = 0;
  while (k1 < N && std::sqrt(std::max(ev1(k1), 0.0)) >= kStageOneRel * smax) ++k1;
  if (k1 == 0) k1 = 1;

  arma::cx_mat B(N, N);
  B.head_cols(k1) = U1.head_cols(k1);
  if (k1 < N) {
    const arma::cx_mat B1 = B.head_cols(k1);
    const arma::cx_mat R = Am - B1 * (B1.t() * Am);
    arma::vec ev2;
    arma::cx_mat U2;
    eig_desc(R * R.t(), ev2, U2);
    // Top eigenvectors of the residual Gram matrix span the deflated
    // complement; re-orthogonalize against B1 (twice) for a clean basis.
    arma::cx_mat B2 = U2.head_cols(N - k1);
    B2 -= B1 * (B1.t() * B2);
    B2 -= B1 * (B1.t() * B2);
    arma::cx_mat Q2, R2;
    if (!arma::qr_econ(Q2, R2, B2)) {
      throw std::runtime_error("compute_basis: re-orthogonalization failed");
    }
    B.tail_cols(N - k1) = Q2;
  }

  // sigma_j * v_j^H = b_j^H A exactly, so the retained-rank reconstruction
  // B*diag(sigma)*V^H = B*B^H*A is tight by construction.
  arma::cx_mat M = B.t() * Am;  // N x Q
  arma::vec sig(N);
  for (arma::uword j = 0; j < N; ++j) sig(j) = arma::norm(M.row(j), 2);

  std::vector<arma::uword> order(N);
  std::iota(order.begin(), order.end(), arma::uword{0});
  std::stable_sort(order.begin(), order.end(),
                   [&sig](arma::uword a, arma::uword b) { return sig(a) > sig(b); });

  SubspaceBasis basis;
  basis.left_vectors.set_size(N, r);
  basis.right_vectors.set_size(Q, r);
  basis.singular_values.set_size(r);
  for (arma::uword j = 0; j < r; ++j) {
    const arma::uword src = order[j];
    basis.left_vectors.col(j) = B.col(src);
    basis.singular_values(j) = sig(src);
    if (sig(src) > 1e-300) {
      basis.right_vectors.col(j) = M.row(src).t() / sig(src);
    } else {
      basis.right_vectors.col(j).zeros();
    }
  }
  basis.sigma_th_rel = sigma_th_rel;
  basis.sigma_th = sigma_th_rel * basis.singular_values(0);
  basis.k_init = 0;
  while (basis.k_init < r && basis.singular_values(basis.k_init) > basis.sigma_th) {
    ++basis.k_init;
  }
  basis.user_vector = a_us.entries;
  basis.user_coeffs = basis.left_vectors.t() * a_us.entries;
  return basis;
}

arma::cx_vec project_out(const SteeringVector& a_us, const SubspaceBasis& basis,
                         arma::uword k) {
  const arma::uword r = basis.singular_values.n_elem;
  if (k > r) {
    throw std::invalid_argument("project_out: k out of range [0, r]");
  }
  if (a_us.entries.n_elem != basis.left_vectors.n_rows) {
    throw std::invalid_argument("project_out: dimension mismatch");
  }
  arma::cx_vec a_proj = a_us.entries;
  if (k > 0) {
    const arma::cx_vec c = basis.left_vectors.head_cols(k).t() * a_us.entries;
    a_proj -= basis.left_vectors.head_cols(k) * c;
  }
  return a_proj;
}

double user_power_closed_form(const SubspaceBasis& basis, arma::uword k) {
  const arma::uword r = basis.singular_values.n_elem;
  if (k > r) {
    throw std::invalid_argument("user_power_closed_form: k out of range [0, r]");
  }
  double acc = 0.0;
  for (arma::uword j = 0; j < k; ++j) acc += std::norm(basis.user_coeffs(j));
  const double p = 1.0 - acc;
  if (p <= 1e-14) {
    throw DegenerateSubspaceError(
        "user_power_closed_form: user vector lies inside the k-dominant subspace");
  }
  return p;
}

double ler_power_closed_form(const SubspaceBasis& basis, arma::uword k,
                             arma::uword q) {
  const arma::uword r = basis.singular_values.n_elem;
  const arma::uword N = basis.left_vectors.n_rows;
  if (r != N) {
    throw std::invalid_argument(
        "ler_power_closed_form: requires the full-rank regime r = N");
  }
  if (k > r) {
    throw std::invalid_argument("ler_power_closed_form: k out of range [0, r]");
  }
  if (q >= basis.right_vectors.n_rows) {
    throw std::invalid_argument("ler_power_closed_form: column index out of range");
  }
  const double denom = user_power_closed_form(basis, k);  // throws if degenerate
  std::complex<double> num = 0.0;
  for (arma::uword j = k; j < r; ++j) {
    num += std::conj(basis.user_coeffs(j)) * basis.singular_values(j) *
           std::conj(basis.right_vectors(q, j));
  }
  return std::norm(num) / denom;
}

}  // namespace nfler
