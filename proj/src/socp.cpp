// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Homogeneous self-dual interior-point solver for the P2 cone program.
//
// Conic form: min c'x  s.t.  G x + s = h,  s in K = R+^1 x SOC_{2N+1} x SOC_3^Q,
// over the embedding variables (x, z, s, tau, kappa) with residuals
//   Rx = G'z + c tau,   Rz = G x + s - h tau,   Rt = c'x + h'z + kappa.
// Newton directions use Nesterov-Todd scaling (lam = W z = W^{-1} s) and a
// Mehrotra predictor-corrector; the reduced system is solved through the
// Cholesky factor of H = G' W^{-2} G with one round of iterative refinement.

#include "nfler/socp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "nfler/errors.hpp"
#include "nfler/serialize.hpp"

namespace nfler {

namespace {

using arma::uword;

struct ConeLayout {
  uword m = 0;
  uword nl = 0;
  std::vector<std::pair<uword, uword>> idx;  // SOC ranges [a, b)
};

struct Scaling {
  arma::vec wlp;                 // nl (sqrt(s_i/z_i))
  std::vector<double> beta;      // per SOC
  std::vector<arma::vec> v;      // per SOC, hyperbolic Householder point
  arma::vec lam;                 // m
};

arma::vec jprod(const arma::vec& u, const arma::vec& w) {
  arma::vec out(u.n_elem);
  out(0) = arma::dot(u, w);
  out.subvec(1, u.n_elem - 1) =
      u(0) * w.subvec(1, w.n_elem - 1) + w(0) * u.subvec(1, u.n_elem - 1);
  return out;
}

arma::vec jdiv(const arma::vec& lam, const arma::vec& u) {
  const uword d = lam.n_elem;
  const double l0 = lam(0);
  const arma::vec l1 = lam.subvec(1, d - 1);
  const double det = l0 * l0 - arma::dot(l1, l1);
  arma::vec out(d);
  out(0) = (l0 * u(0) - arma::dot(l1, u.subvec(1, d - 1))) / det;
  out.subvec(1, d - 1) = (u.subvec(1, d - 1) - out(0) * l1) / l0;
  return out;
}

// NT scaling of one second-order cone: W = beta * (2 v v' - J) with
// v'Jv = 1, so that W z = W^{-1} s = lam.
void soc_nt(const arma::vec& sb, const arma::vec& zb, double& beta, arma::vec& v,
            arma::vec& lam) {
  const uword d = sb.n_elem;
  const arma::vec s1 = sb.subvec(1, d - 1);
  const arma::vec z1 = zb.subvec(1, d - 1);
  const double ra = std::sqrt(std::max(sb(0) * sb(0) - arma::dot(s1, s1), 1e-300));
  const double rb = std::sqrt(std::max(zb(0) * zb(0) - arma::dot(z1, z1), 1e-300));
  const arma::vec sbar = sb / ra;
  const arma::vec zbar = zb / rb;
  const double gamma =
      std::sqrt(std::max((1.0 + arma::dot(sbar, zbar)) / 2.0, 1e-300));
  v = sbar;
  v.subvec(1, d - 1) -= zbar.subvec(1, d - 1);
  v(0) += zbar(0);
  v /= 2.0 * gamma;          // vt = (sbar + J zbar) / (2 gamma)
  v(0) += 1.0;
  v /= std::sqrt(2.0 * v(0));
  beta = std::sqrt(ra / rb);
  const double dd = sbar(0) + zbar(0) + 2.0 * gamma;
  lam.set_size(d);
  lam(0) = gamma;
  lam.subvec(1, d - 1) = ((gamma + zbar(0)) / dd) * sbar.subvec(1, d - 1) +
                         ((gamma + sbar(0)) / dd) * zbar.subvec(1, d - 1);
  lam *= std::sqrt(ra * rb);
}

double cone_margin(const ConeLayout& lay, const arma::vec& s) {
  double mg = std::numeric_limits<double>::infinity();
  for (uword i = 0; i < lay.nl; ++i) mg = std::min(mg, s(i));
  for (const auto& [a, b] : lay.idx) {
    mg = std::min(mg, s(a) - arma::norm(s.subvec(a + 1, b - 1)));
  }
  return mg;
}

struct SolveInfo {
  std::string status = "max_iter";
  uword iters = 0;
  double pres = std::numeric_limits<double>::quiet_NaN();
  double dres = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double relgap = std::numeric_limits<double>::quiet_NaN();
};

struct ConeLPResult {
  arma::vec x, s, z;
  SolveInfo info;
};

ConeLPResult solve_conelp_hsd(const arma::vec& c, const arma::mat& Gm,
                              const arma::vec& h, const ConeLayout& lay,
                              const SocpOptions& opts, const arma::vec* x_init) {
  const uword m = Gm.n_rows;
  const uword n = Gm.n_cols;
  const uword nl = lay.nl;
  const double tol = opts.tol;
  const double deg = static_cast<double>(nl + lay.idx.size() + 1);
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
        .count();
  };

  arma::vec e(m, arma::fill::zeros);
  for (uword i = 0; i < nl; ++i) e(i) = 1.0;
  for (const auto& [a, b] : lay.idx) e(a) = 1.0;

  const auto apply_w = [&](const Scaling& sc, const arma::vec& u) {
    arma::vec out(m);
    for (uword i = 0; i < nl; ++i) out(i) = sc.wlp(i) * u(i);
    for (std::size_t bi = 0; bi < lay.idx.size(); ++bi) {
      const auto [a, b] = lay.idx[bi];
      const arma::vec& v = sc.v[bi];
      const arma::vec ub = u.subvec(a, b - 1);
      arma::vec jub = ub;
      jub.subvec(1, jub.n_elem - 1) *= -1.0;
      out.subvec(a, b - 1) = sc.beta[bi] * (2.0 * v * arma::dot(v, ub) - jub);
    }
    return out;
  };
  const auto apply_winv = [&](const Scaling& sc, const arma::vec& u) {
    arma::vec out(m);
    for (uword i = 0; i < nl; ++i) out(i) = u(i) / sc.wlp(i);
    for (std::size_t bi = 0; bi < lay.idx.size(); ++bi) {
      const auto [a, b] = lay.idx[bi];
      arma::vec jv = sc.v[bi];
      jv.subvec(1, jv.n_elem - 1) *= -1.0;
      const arma::vec ub = u.subvec(a, b - 1);
      arma::vec jub = ub;
      jub.subvec(1, jub.n_elem - 1) *= -1.0;
      out.subvec(a, b - 1) = (2.0 * jv * arma::dot(jv, ub) - jub) / sc.beta[bi];
    }
    return out;
  };
  const auto lam_div = [&](const Scaling& sc, const arma::vec& u) {
    arma::vec out(m);
    for (uword i = 0; i < nl; ++i) out(i) = u(i) / sc.lam(i);
    for (const auto& [a, b] : lay.idx) {
      out.subvec(a, b - 1) = jdiv(sc.lam.subvec(a, b - 1), u.subvec(a, b - 1));
    }
    return out;
  };
  const auto lam_prod_pair = [&](const arma::vec& p, const arma::vec& u) {
    arma::vec out(m);
    for (uword i = 0; i < nl; ++i) out(i) = p(i) * u(i);
    for (const auto& [a, b] : lay.idx) {
      out.subvec(a, b - 1) = jprod(p.subvec(a, b - 1), u.subvec(a, b - 1));
    }
    return out;
  };
  // Largest step length keeping p + t*u in the cone (p given by its NT image).
  const auto max_step = [&](const arma::vec& p, const arma::vec& u) {
    double t = std::numeric_limits<double>::infinity();
    for (uword i = 0; i < nl; ++i) {
      if (u(i) < 0.0) t = std::min(t, -p(i) / u(i));
    }
    for (const auto& [a, b] : lay.idx) {
      const double l0 = p(a);
      const double u0 = u(a);
      const arma::vec l1 = p.subvec(a + 1, b - 1);
      const arma::vec u1 = u.subvec(a + 1, b - 1);
      const double aa = u0 * u0 - arma::dot(u1, u1);
      const double bb = l0 * u0 - arma::dot(l1, u1);
      const double cc = std::max(l0 * l0 - arma::dot(l1, l1), 0.0);
      const double disc = bb * bb - aa * cc;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      if (std::abs(aa) > 1e-300) {
        for (const double rt : {(-bb - sq) / aa, (-bb + sq) / aa}) {
          if (rt > 0.0) t = std::min(t, rt);
        }
      } else if (bb < 0.0) {
        t = std::min(t, -cc / (2.0 * bb));
      }
    }
    return t;
  };

  // Initial point: least-squares x, slacks/duals shifted into the cone interior.
  arma::vec x;
  if (x_init != nullptr) {
    x = *x_init;
  } else if (!arma::solve(x, Gm, h)) {
    x.zeros(n);
  }
  arma::vec s = h - Gm * x;
  double mg = cone_margin(lay, s);
  if (mg <= 1e-8 * std::max(1.0, arma::norm(s))) s += (1.0 - mg) * e;
  arma::vec z;
  if (!arma::solve(z, Gm.t(), -c)) z.zeros(m);
  mg = cone_margin(lay, z);
  if (mg <= 1e-8 * std::max(1.0, arma::norm(z))) z += (1.0 - mg) * e;
  double tau = 1.0;
  double kappa = 1.0;

  const double hn = std::max(1.0, arma::norm(h));
  const double cn = std::max(1.0, arma::norm(c));

  ConeLPResult best;
  double best_merit = std::numeric_limits<double>::infinity();
  SolveInfo best_info;
  SolveInfo info;
  bool have_best = false;
  double pres = 0, dres = 0, gap = 0, relgap = 0;

  for (uword it = 0; it < opts.max_iters; ++it) {
    const arma::vec Rx = Gm.t() * z + c * tau;
    const arma::vec Rz = Gm * x + s - h * tau;
    const double cx = arma::dot(c, x);
    const double hz = arma::dot(h, z);
    const double Rt = cx + hz + kappa;
    gap = arma::dot(s, z) / (tau * tau);
    const double pcost = cx / tau;
    relgap = gap / std::max(1.0, std::abs(pcost));
    pres = arma::norm(Rz) / tau / hn;
    dres = arma::norm(Rx) / tau / cn;
    const double merit = std::max({pres, dres, relgap});
    if (merit < best_merit) {
      best_merit = merit;
      best.x = x / tau;
      best.s = s / tau;
      best.z = z / tau;
      best_info = SolveInfo{"", it, pres, dres, gap, relgap};
      have_best = true;
    }
    info = SolveInfo{"max_iter", it, pres, dres, gap, relgap};
    if (pres <= tol && dres <= tol && (gap <= tol || relgap <= tol)) {
      info.status = "optimal";
      ConeLPResult out{x / tau, s / tau, z / tau, info};
      return out;
    }
    if (hz < 0.0 && arma::norm(Gm.t() * z) / cn / (-hz) <= tol) {
      info.status = "primal_infeasible";
      ConeLPResult out{x / tau, s / tau, z / tau, info};
      return out;
    }
    if (opts.cancel != nullptr && opts.cancel->load()) {
      info.status = "cancelled";
      break;
    }
    if (opts.time_budget_seconds > 0.0 && elapsed() > opts.time_budget_seconds) {
      info.status = "time_budget";
      break;
    }

    // NT scaling.
    Scaling sc;
    sc.wlp.set_size(nl);
    sc.lam.set_size(m);
    for (uword i = 0; i < nl; ++i) {
      sc.wlp(i) = std::sqrt(s(i) / z(i));
      sc.lam(i) = std::sqrt(s(i) * z(i));
    }
    sc.beta.resize(lay.idx.size());
    sc.v.resize(lay.idx.size());
    for (std::size_t bi = 0; bi < lay.idx.size(); ++bi) {
      const auto [a, b] = lay.idx[bi];
      arma::vec lam_blk;
      soc_nt(s.subvec(a, b - 1), z.subvec(a, b - 1), sc.beta[bi], sc.v[bi], lam_blk);
      sc.lam.subvec(a, b - 1) = lam_blk;
    }
    const double mu = (arma::dot(s, z) + tau * kappa) / deg;

    // H = (W^{-1} G)' (W^{-1} G), factored once per iteration.
    arma::mat WiG(m, n);
    for (uword i = 0; i < nl; ++i) WiG.row(i) = Gm.row(i) / sc.wlp(i);
    for (std::size_t bi = 0; bi < lay.idx.size(); ++bi) {
      const auto [a, b] = lay.idx[bi];
      arma::vec jv = sc.v[bi];
      jv.subvec(1, jv.n_elem - 1) *= -1.0;
      const arma::mat blk = Gm.rows(a, b - 1);
      arma::mat jblk = blk;
      jblk.rows(1, jblk.n_rows - 1) *= -1.0;
      WiG.rows(a, b - 1) = (2.0 * jv * (jv.t() * blk) - jblk) / sc.beta[bi];
    }
    arma::mat H = WiG.t() * WiG;
    arma::mat L;
    bool ok = false;
    double jitter = 1e-14 * arma::trace(H) / static_cast<double>(n);
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
      ok = arma::chol(L, H + jitter * arma::eye(n, n), "lower");
      jitter *= 1e3;
    }
    if (!ok) {
      info.status = "stalled";
      break;
    }

    // fsolve(bx, bz): { G'uz = bx, G ux - W^2 uz = bz }, one refinement round.
    const auto fsolve_raw = [&](const arma::vec& bx, const arma::vec& bz,
                                arma::vec& ux, arma::vec& uz) {
      const arma::vec rhs = bx + WiG.t() * apply_winv(sc, bz);
      ux = arma::solve(arma::trimatu(L.t()), arma::solve(arma::trimatl(L), rhs));
      uz = apply_winv(sc, apply_winv(sc, Gm * ux - bz));
    };
    const auto fsolve = [&](const arma::vec& bx, const arma::vec& bz,
                            arma::vec& ux, arma::vec& uz) {
      fsolve_raw(bx, bz, ux, uz);
      const arma::vec rx = bx - Gm.t() * uz;
      const arma::vec rz = bz - (Gm * ux - apply_w(sc, apply_w(sc, uz)));
      arma::vec cx2, cz2;
      fsolve_raw(rx, rz, cx2, cz2);
      ux += cx2;
      uz += cz2;
    };

    arma::vec x1, z1;
    fsolve(-c, h, x1, z1);
    const arma::vec Wz1 = apply_w(sc, z1);
    const double dt_den = -kappa / tau - arma::dot(Wz1, Wz1);

    const auto newton = [&](double eta, const arma::vec& d_s, double d_t,
                            arma::vec& dx, arma::vec& dz, arma::vec& ds,
                            double& dtau, double& dkappa) {
      const arma::vec g = lam_div(sc, d_s);
      arma::vec xh, zh;
      fsolve(-eta * Rx, -eta * Rz - apply_w(sc, g), xh, zh);
      dtau = (-eta * Rt - d_t / tau - arma::dot(c, xh) - arma::dot(h, zh)) / dt_den;
      dx = xh + dtau * x1;
      dz = zh + dtau * z1;
      ds = -eta * Rz - Gm * dx + h * dtau;
      dkappa = (d_t - kappa * dtau) / tau;
    };

    // Affine (predictor) direction.
    const arma::vec lamlam = lam_prod_pair(sc.lam, sc.lam);
    arma::vec dxa, dza, dsa;
    double dtaua, dkappaa;
    newton(1.0, -lamlam, -tau * kappa, dxa, dza, dsa, dtaua, dkappaa);
    const arma::vec dss = apply_winv(sc, dsa);
    const arma::vec dzs = apply_w(sc, dza);
    double a_aff = std::min({1.0, max_step(sc.lam, dss), max_step(sc.lam, dzs)});
    if (dtaua < 0.0) a_aff = std::min(a_aff, -tau / dtaua);
    if (dkappaa < 0.0) a_aff = std::min(a_aff, -kappa / dkappaa);
    const double sigma = std::pow(1.0 - a_aff, 3);

    // Combined (corrector) direction with residual damping eta = 1 - sigma.
    const arma::vec d_s = -lamlam - lam_prod_pair(dss, dzs) + sigma * mu * e;
    const double d_t = -tau * kappa - dtaua * dkappaa + sigma * mu;
    arma::vec dx, dz, ds;
    double dtau, dkappa;
    newton(1.0 - sigma, d_s, d_t, dx, dz, ds, dtau, dkappa);
    double a_max =
        std::min(max_step(sc.lam, apply_winv(sc, ds)), max_step(sc.lam, apply_w(sc, dz)));
    if (dtau < 0.0) a_max = std::min(a_max, -tau / dtau);
    if (dkappa < 0.0) a_max = std::min(a_max, -kappa / dkappa);
    const double alpha = std::min(1.0, 0.99 * a_max);
    const bool finite = dx.is_finite() && dz.is_finite() && ds.is_finite() &&
                        std::isfinite(dtau) && std::isfinite(dkappa);
    if (!finite || alpha < 1e-7) {
      info.status = "stalled";
      break;
    }
    x += alpha * dx;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
    info.iters = it + 1;
  }

  // Non-converged exit: fall back to the best iterate seen.
  if (have_best) {
    best_info.status = (best_merit <= 1e-6) ? "optimal" : info.status;
    if (best_info.status.empty()) best_info.status = info.status;
    best.info = best_info;
    best.info.iters = info.iters;
    return best;
  }
  ConeLPResult out{x / tau, s / tau, z / tau, info};
  return out;
}

// P2 in conic form over the 2N real variables [Re w; Im w], with the
// equality Im{w^H a_us} = 0 eliminated by a Householder nullspace basis Zb.
struct P2Data {
  arma::vec c;
  arma::mat G;
  arma::vec h;
  ConeLayout lay;
  arma::mat Zb;  // 2N x (2N-1), orthonormal columns spanning ev-perp
};

P2Data build_p2(const arma::cx_mat& A, const arma::cx_vec& a_us, double t_lin) {
  const uword N = A.n_rows;
  const uword Q = A.n_cols;
  const uword n2 = 2 * N;
  const arma::vec ar = arma::real(a_us);
  const arma::vec ai = arma::imag(a_us);
  arma::vec f(n2), ev(n2);
  f.head(N) = ar;
  f.tail(N) = ai;
  ev.head(N) = ai;
  ev.tail(N) = -ar;

  arma::vec u = ev;
  u(n2 - 1) += (ev(n2 - 1) != 0.0) ? (ev(n2 - 1) > 0.0 ? 1.0 : -1.0) * arma::norm(ev)
                                   : arma::norm(ev);
  u /= arma::norm(u);
  arma::mat Hh = arma::eye(n2, n2) - 2.0 * (u * u.t());

  P2Data d;
  d.Zb = Hh.head_cols(n2 - 1);
  const uword n = n2 - 1;
  const arma::vec ft = d.Zb.t() * f;
  const uword m = 1 + (n2 + 1) + 3 * Q;
  d.G.zeros(m, n);
  d.h.zeros(m);
  d.G.row(0) = -ft.t();       // slack0 = f~'x >= 0
  d.h(1) = 1.0;               // ||Zb x|| <= 1
  d.G.rows(2, 1 + n2) = -d.Zb;
  uword off = 2 + n2;
  const double sq = std::sqrt(t_lin);
  arma::vec g1(n2), g2(n2);
  for (uword q = 0; q < Q; ++q) {
    const arma::vec aqr = arma::real(A.col(q));
    const arma::vec aqi = arma::imag(A.col(q));
    g1.head(N) = aqr;
    g1.tail(N) = aqi;  // Re{w^H a_q}
    g2.head(N) = aqi;
    g2.tail(N) = -aqr;  // Im{w^H a_q}
    d.h(off) = sq;
    d.G.row(off + 1) = -(g1.t() * d.Zb);
    d.G.row(off + 2) = -(g2.t() * d.Zb);
    off += 3;
  }
  d.c = -ft;
  d.lay.m = m;
  d.lay.nl = 1;
  d.lay.idx.emplace_back(1, 2 + n2);
  for (uword q = 0; q < Q; ++q) {
    d.lay.idx.emplace_back(2 + n2 + 3 * q, 2 + n2 + 3 * (q + 1));
  }
  return d;
}

double max_abs_response(const arma::cx_mat& A, const arma::cx_vec& w) {
  const arma::cx_rowvec y = w.t() * A;
  double best = 0.0;
  for (uword q = 0; q < y.n_elem; ++q) best = std::max(best, std::abs(y(q)));
  return best;
}

}  // namespace

SocpSolution solve_p2(const SocpProblem& problem, const SocpOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const arma::cx_mat& A = problem.A;
  const arma::cx_vec& a_us = problem.a_us;
  if (!(problem.t_linear > 0.0)) {
    throw std::invalid_argument(
        "solve_p2: t_linear must be positive (t = 0 is ZF territory)");
  }
  if (A.n_rows != a_us.n_elem || A.n_cols < 1) {
    throw std::invalid_argument("solve_p2: dimension mismatch");
  }
  if (std::abs(arma::norm(a_us) - 1.0) > 1e-9) {
    throw std::invalid_argument("solve_p2: a_us must be unit norm");
  }
  const uword N = A.n_rows;
  const double sqt = std::sqrt(problem.t_linear);

  P2Data d = build_p2(A, a_us, problem.t_linear);

  SocpSolution sol;
  const double mrt_leak = max_abs_response(A, a_us);
  if (mrt_leak * mrt_leak <= problem.t_linear) {
    // MRT is feasible, hence optimal (objective 1 is the global upper bound).
    // Exact analytic primal/dual pair: x = Zb'f, z = (0; 1; -f; 0...).
    arma::vec f(2 * N);
    f.head(N) = arma::real(a_us);
    f.tail(N) = arma::imag(a_us);
    sol.weights = a_us;
    sol.objective = 1.0;
    sol.x = d.Zb.t() * f;
    sol.s = d.h - d.G * sol.x;
    sol.z.zeros(d.lay.m);
    sol.z(1) = 1.0;
    sol.z.subvec(2, 1 + 2 * N) = -f;
    sol.duality_gap = 0.0;
    sol.max_constraint_violation = std::max(0.0, mrt_leak - sqt);
    sol.iterations = 0;
    sol.status = "optimal";
    sol.primal_residual = 0.0;
    sol.dual_residual = 0.0;
    sol.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return sol;
  }

  arma::vec x0;
  const arma::vec* x0p = nullptr;
  if (opts.warm_start != nullptr && opts.warm_start->n_elem == N) {
    arma::vec wv(2 * N);
    wv.head(N) = arma::real(*opts.warm_start);
    wv.tail(N) = arma::imag(*opts.warm_start);
    const double nw = arma::norm(wv);
    if (nw > 1e-12) wv *= 0.99 / std::max(1.0, nw);
    x0 = d.Zb.t() * wv;
    x0p = &x0;
    sol.warm_started = true;
  }

  ConeLPResult res = solve_conelp_hsd(d.c, d.G, d.h, d.lay, opts, x0p);

  const arma::vec xf = d.Zb * res.x;
  arma::cx_vec w(N);
  for (uword i = 0; i < N; ++i) w(i) = std::complex<double>(xf(i), xf(N + i));
  const double nw = arma::norm(w);
  // The ball constraint is active in the far-user regime; snap those
  // solutions to exactly unit norm.  A constraint-bound optimum with
  // ||w|| < 1 is reported as solved -- inflating it would break the cones.
  if (nw >= 1.0 || (nw >= 1.0 - 1e-8 && nw > 1e-12)) w /= nw;
  sol.weights = w;
  sol.objective = std::real(arma::cdot(w, a_us));
  sol.duality_gap = res.info.relgap;
  sol.max_constraint_violation = std::max(0.0, max_abs_response(A, w) - sqt);
  sol.iterations = res.info.iters;
  sol.status = res.info.status;
  sol.primal_residual = res.info.pres;
  sol.dual_residual = res.info.dres;
  sol.x = res.x;
  sol.s = res.s;
  sol.z = res.z;
  sol.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return sol;
}

std::map<std::string, double> kkt_residuals(const SocpProblem& problem,
                                            const SocpSolution& solution) {
  const arma::cx_mat& A = problem.A;
  const arma::cx_vec& w = solution.weights;
  const uword N = A.n_rows;
  const double sqt = std::sqrt(problem.t_linear);
  P2Data d = build_p2(A, problem.a_us, problem.t_linear);

  // Primal side from the reported weights.
  const double viol_q = max_abs_response(A, w) - sqt;
  const double viol_norm = arma::norm(w) - 1.0;
  const std::complex<double> ip = arma::cdot(w, problem.a_us);
  const double viol_im = std::abs(ip.imag());
  const double viol_re = -ip.real();
  const double primal =
      std::max({0.0, viol_q, viol_norm, viol_im, viol_re});

  // Dual side from the stored certificate.
  double dual = 0.0;
  double comp = 0.0;
  if (solution.z.n_elem == d.lay.m) {
    const arma::vec dres_vec = d.G.t() * solution.z + d.c;
    const double zmargin = cone_margin(d.lay, solution.z);
    dual = std::max(arma::norm(dres_vec) / (1.0 + arma::norm(d.c)),
                    std::max(0.0, -zmargin));

    arma::vec wv(2 * N);
    wv.head(N) = arma::real(w);
    wv.tail(N) = arma::imag(w);
    const arma::vec xw = d.Zb.t() * wv;
    const arma::vec sw = d.h - d.G * xw;
    comp = std::abs(arma::dot(sw, solution.z)) /
           (1.0 + std::abs(solution.objective));
  }

  return {{"primal", primal}, {"dual", dual}, {"complementary", comp}};
}

nlohmann::json to_json(const SocpProblem& problem) {
  nlohmann::json j;
  j["n_antennas"] = problem.A.n_rows;
  j["n_constraints"] = problem.A.n_cols;
  j["t_linear"] = problem.t_linear;
  j["a_us"] = cx_vec_to_json(problem.a_us);
  nlohmann::json cols = nlohmann::json::array();
  for (uword q = 0; q < problem.A.n_cols; ++q) {
    cols.push_back(cx_vec_to_json(problem.A.col(q)));
  }
  j["A_cols"] = cols;
  return j;
}

nlohmann::json to_json(const SocpSolution& sol) {
  nlohmann::json j;
  j["weights"] = cx_vec_to_json(sol.weights);
  j["objective"] = sol.objective;
  j["duality_gap"] = sol.duality_gap;
  j["max_constraint_violation"] = sol.max_constraint_violation;
  j["iterations"] = sol.iterations;
  j["wall_time_seconds"] = sol.wall_time_seconds;
  j["status"] = sol.status;
  j["primal_residual"] = sol.primal_residual;
  j["dual_residual"] = sol.dual_residual;
  j["warm_started"] = sol.warm_started;
  j["certificate"] = {{"x", std::vector<double>(sol.x.begin(), sol.x.end())},
                      {"s", std::vector<double>(sol.s.begin(), sol.s.end())},
                      {"z", std::vector<double>(sol.z.begin(), sol.z.end())}};
  return j;
}

SocpProblem socp_problem_from_json(const nlohmann::json& j) {
  SocpProblem p;
  p.t_linear = j.at("t_linear").get<double>();
  p.a_us = cx_vec_from_json(j.at("a_us"));
  const auto& cols = j.at("A_cols");
  const uword N = j.at("n_antennas").get<uword>();
  const uword Q = j.at("n_constraints").get<uword>();
  if (cols.size() != Q) {
    throw std::invalid_argument("socp_problem_from_json: column count mismatch");
  }
  p.A.set_size(N, Q);
  for (uword q = 0; q < Q; ++q) {
    const arma::cx_vec col = cx_vec_from_json(cols[q]);
    if (col.n_elem != N) {
      throw std::invalid_argument("socp_problem_from_json: column length mismatch");
    }
    p.A.col(q) = col;
  }
  return p;
}

}  // namespace nfler
