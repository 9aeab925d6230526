// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Unit tests for the dominant-subspace decomposition and the closed-form
// user/LER powers of the projected precoder.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "nfler/field.hpp"
#include "nfler/subspace.hpp"
#include "oracles.hpp"

using namespace nfler;

namespace {

struct BasisFixture {
  oracle::SmallInstance inst;
  SteeringMatrix A;
  SteeringVector a_us;
  SubspaceBasis basis;
};

BasisFixture make_fixture(std::uint64_t seed, arma::uword n, arma::uword q,
                          double sigma_th_rel = 1e-10) {
  std::mt19937_64 rng(seed);
  BasisFixture f;
  f.inst = oracle::random_instance(rng, n, q);
  f.A = steering_matrix(f.inst.geom, f.inst.points);
  f.a_us = steering_vector(f.inst.geom, f.inst.user);
  f.basis = compute_basis(f.A, f.a_us, sigma_th_rel);
  return f;
}

arma::cx_vec unit_weights(const SteeringVector& a_us, const SubspaceBasis& basis,
                          arma::uword k) {
  arma::cx_vec w = project_out(a_us, basis, k);
  return w / arma::norm(w);
}

}  // namespace

TEST_CASE("single-point region reduces to a rank-one basis") {
  const BasisFixture f = make_fixture(101, 8, 1);
  REQUIRE(f.basis.left_vectors.n_cols == 1);
  CHECK(f.basis.singular_values(0) == doctest::Approx(1.0).epsilon(1e-12));
  // b_1 equals the lone (unit-norm) steering column up to a phase.
  CHECK(std::abs(arma::cdot(f.basis.left_vectors.col(0), f.A.columns.col(0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.basis.k_init == 1);
}

TEST_CASE("left vectors are orthonormal and singular values non-increasing") {
  for (std::uint64_t seed : {201u, 202u, 203u}) {
    const BasisFixture f = make_fixture(seed, 12, 30);
    const arma::uword r = f.basis.left_vectors.n_cols;
    CHECK(r == 12);  // r = min(N, Q)
    const arma::cx_mat gram =
        f.basis.left_vectors.t() * f.basis.left_vectors;
    CHECK(arma::norm(gram - arma::eye<arma::cx_mat>(r, r), "fro") < 1e-10);
    for (arma::uword j = 1; j < r; ++j) {
      CHECK(f.basis.singular_values(j) <= f.basis.singular_values(j - 1) + 1e-15);
    }
    CHECK(f.basis.singular_values(0) > 0.0);
  }
}

TEST_CASE("factors reconstruct the steering matrix") {
  const BasisFixture f = make_fixture(301, 10, 25);
  const arma::cx_mat recon = f.basis.left_vectors *
                             arma::diagmat(f.basis.singular_values) *
                             f.basis.right_vectors.t();
  CHECK(arma::norm(recon - f.A.columns, "fro") /
            arma::norm(f.A.columns, "fro") <
        1e-8);
}

TEST_CASE("k_init counts singular values above the relative threshold") {
  const BasisFixture f = make_fixture(401, 10, 22);
  CHECK(f.basis.sigma_th ==
        doctest::Approx(f.basis.sigma_th_rel * f.basis.singular_values(0))
            .epsilon(1e-14));
  arma::uword count = 0;
  for (arma::uword j = 0; j < f.basis.singular_values.n_elem; ++j) {
    if (f.basis.singular_values(j) > f.basis.sigma_th) ++count;
  }
  CHECK(f.basis.k_init == count);
  // A loose threshold truncates the count.
  const BasisFixture g = make_fixture(401, 10, 22, 1e-1);
  CHECK(g.basis.k_init < g.basis.left_vectors.n_cols);
  CHECK(g.basis.k_init >= 1);
}

TEST_CASE("user coefficients are the basis inner products") {
  const BasisFixture f = make_fixture(501, 9, 18);
  const arma::cx_vec c = f.basis.left_vectors.t() * f.a_us.entries;
  CHECK(arma::norm(c - f.basis.user_coeffs) < 1e-12);
  CHECK(arma::norm(f.basis.user_vector - f.a_us.entries) == 0.0);
  const double total = arma::accu(arma::square(arma::abs(f.basis.user_coeffs)));
  CHECK(total <= 1.0 + 1e-12);
  // Full-rank case: the basis spans C^N, so the coefficients capture a_us.
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero matrices are rejected") {
  SteeringMatrix zero;
  zero.columns = arma::cx_mat(4, 2, arma::fill::zeros);
  SteeringVector a;
  a.entries = arma::cx_vec(4, arma::fill::ones);
  a.entries /= arma::norm(a.entries);
  CHECK_THROWS_AS(compute_basis(zero, a), std::runtime_error);
}

TEST_CASE("project_out removes exactly the leading subspace") {
  const BasisFixture f = make_fixture(601, 10, 24);
  const arma::uword r = f.basis.left_vectors.n_cols;
  // k = 0 leaves the vector untouched.
  CHECK(arma::norm(project_out(f.a_us, f.basis, 0) - f.a_us.entries) == 0.0);
  // Residual is orthogonal to the removed directions.
  for (arma::uword k : {arma::uword(1), arma::uword(3), r}) {
    const arma::cx_vec resid = project_out(f.a_us, f.basis, k);
    for (arma::uword j = 0; j < k; ++j) {
      CHECK(std::abs(arma::cdot(f.basis.left_vectors.col(j), resid)) < 1e-12);
    }
  }
  // Full deflation of a full-rank basis annihilates the vector.
  CHECK(arma::norm(project_out(f.a_us, f.basis, r)) < 1e-8);
  CHECK_THROWS_AS(project_out(f.a_us, f.basis, r + 1), std::invalid_argument);
}

TEST_CASE("full projection matches a Gram-solve projector when r < N") {
  std::mt19937_64 rng(701);
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = oracle::random_instance(rng, 14, 6);
    const SteeringMatrix A = steering_matrix(inst.geom, inst.points);
    const SteeringVector a_us = steering_vector(inst.geom, inst.user);
    const SubspaceBasis basis = compute_basis(A, a_us);
    const arma::uword r = basis.left_vectors.n_cols;
    REQUIRE(r == 6);
    const arma::cx_vec resid = project_out(a_us, basis, r);
    const arma::cx_vec expected =
        a_us.entries - oracle::gram_projector_apply(A.columns, a_us.entries);
    CHECK(arma::norm(resid - expected) < 1e-8);
  }
}

TEST_CASE("closed-form user power matches the direct evaluation") {
  const BasisFixture f = make_fixture(801, 10, 26);
  const arma::uword r = f.basis.left_vectors.n_cols;
  CHECK(user_power_closed_form(f.basis, 0) == 1.0);
  double prev = 1.0;
  for (arma::uword k = 1; k + 3 <= r; ++k) {
    const double closed = user_power_closed_form(f.basis, k);
    CHECK(closed <= prev + 1e-15);  // monotone non-increasing in k
    prev = closed;
    const arma::cx_vec w = unit_weights(f.a_us, f.basis, k);
    const double direct = oracle::naive_received_power(w, f.a_us.entries);
    CHECK(std::abs(closed - direct) <= 1e-9 * direct + 1e-18);
  }
}

TEST_CASE("user power throws when the projection degenerates") {
  // A user sitting on a grid point lies inside the span: full deflation
  // leaves nothing.
  std::mt19937_64 rng(901);
  const auto inst = oracle::random_instance(rng, 8, 12);
  SteeringMatrix A = steering_matrix(inst.geom, inst.points);
  const SteeringVector a_us = steering_vector(inst.geom, inst.points[0]);
  const SubspaceBasis basis = compute_basis(A, a_us);
  CHECK_THROWS_AS(user_power_closed_form(basis, basis.left_vectors.n_cols),
                  DegenerateSubspaceError);
}

TEST_CASE("closed-form LER power matches the direct evaluation at full rank") {
  const BasisFixture f = make_fixture(1001, 8, 20);
  const arma::uword r = f.basis.left_vectors.n_cols;
  REQUIRE(r == 8);
  for (arma::uword k : {arma::uword(0), arma::uword(1), arma::uword(2)}) {
    const arma::cx_vec w = unit_weights(f.a_us, f.basis, k);
    for (arma::uword q = 0; q < f.A.columns.n_cols; ++q) {
      const double direct =
          oracle::naive_received_power(w, f.A.columns.col(q));
      const double closed = ler_power_closed_form(f.basis, k, q);
      CHECK(std::abs(closed - direct) <= 1e-9 * direct + 1e-18);
    }
  }
  // k = 0 reduces to the raw MRT cross power.
  for (arma::uword q = 0; q < 4; ++q) {
    const double cross =
        std::norm(arma::cdot(f.a_us.entries, f.A.columns.col(q)));
    CHECK(std::abs(ler_power_closed_form(f.basis, 0, q) - cross) <=
          1e-9 * cross + 1e-18);
  }
}

TEST_CASE("LER power guards its preconditions") {
  const BasisFixture full = make_fixture(1101, 8, 20);
  CHECK_THROWS_AS(ler_power_closed_form(full.basis, 0, 20),
                  std::invalid_argument);  // q out of range
  const BasisFixture thin = make_fixture(1102, 12, 5);  // r = 5 < N
  CHECK_THROWS_AS(ler_power_closed_form(thin.basis, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("truncated factors beat random rank-k approximations") {
  const BasisFixture f = make_fixture(1201, 9, 21);
  std::mt19937_64 rng(1202);
  const double full_norm = arma::norm(f.A.columns, "fro");
  for (arma::uword k : {arma::uword(1), arma::uword(2), arma::uword(4)}) {
    const arma::cx_mat trunc = f.basis.left_vectors.head_cols(k) *
                               arma::diagmat(f.basis.singular_values.head(k)) *
                               f.basis.right_vectors.head_cols(k).t();
    const double opt = arma::norm(f.A.columns - trunc, "fro");
    for (int rep = 0; rep < 100; ++rep) {
      const arma::cx_mat rival =
          oracle::random_rank_k(rng, 9, 21, k, full_norm);
      CHECK(opt <= arma::norm(f.A.columns - rival, "fro") + 1e-12);
    }
  }
}
