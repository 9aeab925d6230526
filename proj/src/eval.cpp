// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Evaluation harness implementation.

#include "nfler/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>

#include "nfler/errors.hpp"

namespace nfler {

namespace {

using Clock = std::chrono::steady_clock;

// Deterministic stand-in for an interrupt, used by the cancellation tests:
// when NFLER_CANCEL_AFTER_CELLS=K is set, cancellation triggers after K
// sweep/map cells even if no signal arrives.
std::atomic<long> g_cells_until_cancel{-1};
std::atomic<bool> g_hook_cancelled{false};
std::once_flag g_cancel_hook_once;

bool cancel_requested(const std::atomic<bool>* cancel) {
  std::call_once(g_cancel_hook_once, [] {
    if (const char* env = std::getenv("NFLER_CANCEL_AFTER_CELLS")) {
      g_cells_until_cancel.store(std::atol(env));
    }
  });
  if (g_hook_cancelled.load()) return true;
  if (g_cells_until_cancel.load() >= 0 &&
      g_cells_until_cancel.fetch_sub(1) <= 0) {
    g_hook_cancelled.store(true);
    return true;
  }
  return cancel != nullptr && cancel->load();
}

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_point_power(const arma::cx_vec& w, const ArrayGeometry& geom,
                       const std::vector<Point2D>& points) {
  const arma::vec p = point_powers(w, geom, points);
  return p.max();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Candidate grid for the achievable-power map.  Same endpoint-inclusive
// convention as sample_region, but a step beyond a window side collapses
// that axis to its lower bound (a degenerate window is a single cell, not
// an error).
SampledRegion map_grid(const RectRegion& window, double step) {
  validate(window);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("achievable_power_map: step must be positive");
  }
  const auto axis_count = [step](double lo, double hi) {
    const double ratio = (hi - lo) / step;
    return std::max<arma::uword>(
        1, static_cast<arma::uword>(std::floor(ratio + 1e-9)) + 1);
  };
  SampledRegion grid;
  grid.region = window;
  grid.step = step;
  grid.nx = axis_count(window.x_min, window.x_max);
  grid.ny = axis_count(window.y_min, window.y_max);
  grid.points.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
  for (arma::uword ix = 0; ix < grid.nx; ++ix) {
    for (arma::uword iy = 0; iy < grid.ny; ++iy) {
      grid.points.push_back({window.x_min + static_cast<double>(ix) * step,
                             window.y_min + static_cast<double>(iy) * step});
    }
  }
  return grid;
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& cfg) {
  validate(cfg.array);
  validate(cfg.ler);
  Scenario sc;
  sc.cfg = cfg;
  sc.coarse = sample_region(cfg.ler, cfg.delta);
  const auto t0 = Clock::now();
  sc.a_us = steering_vector(cfg.array, cfg.user);
  sc.A = steering_matrix(cfg.array, sc.coarse.points);
  sc.basis = compute_basis(sc.A, sc.a_us, cfg.sigma_th_rel);
  sc.precompute_seconds = seconds_since(t0);
  return sc;
}

PrecoderResult run_method(const Scenario& sc, Method method,
                          const ThresholdSpec& threshold,
                          const SocpOptions& socp_opts) {
  const auto t0 = Clock::now();
  PrecoderResult result;
  switch (method) {
    case Method::MRT:
      result = mrt(sc.a_us);
      break;
    case Method::ZF:
      result = zf(sc.A, sc.a_us);
      break;
    case Method::DoSP:
      result = dosp(sc.basis, threshold, sc.A);
      break;
    case Method::Ridge:
      result = ridge_baseline(sc.A, sc.a_us, threshold);
      break;
    case Method::SOCP: {
      SocpProblem problem{sc.A.columns, sc.a_us.entries, threshold.t_linear};
      const SocpSolution sol = solve_p2(problem, socp_opts);
      result.weights = sol.weights;
      result.method = Method::SOCP;
      result.diagnostics["objective"] = sol.objective;
      result.diagnostics["user_power"] = sol.objective * sol.objective;
      result.diagnostics["duality_gap"] = sol.duality_gap;
      result.diagnostics["iterations"] = static_cast<double>(sol.iterations);
      result.diagnostics["max_constraint_violation"] = sol.max_constraint_violation;
      result.diagnostics["primal_residual"] = sol.primal_residual;
      result.diagnostics["dual_residual"] = sol.dual_residual;
      result.diagnostics["optimal"] = (sol.status == "optimal") ? 1.0 : 0.0;
      break;
    }
  }
  result.diagnostics["realtime_seconds"] = seconds_since(t0);
  return result;
}

EvaluationReport evaluate(const PrecoderResult& precoder, const Scenario& sc) {
  EvaluationReport rep;
  rep.method = to_string(precoder.method);
  rep.p_us_rel_mrt = received_power(precoder.weights, sc.a_us);
  rep.grid_max_power_db =
      power_db(max_point_power(precoder.weights, sc.cfg.array, sc.coarse.points));
  const SampledRegion fine = sample_region(sc.cfg.ler, sc.cfg.delta_fine);
  rep.fine_grid_max_power_db =
      power_db(max_point_power(precoder.weights, sc.cfg.array, fine.points));
  rep.threshold_db = sc.cfg.threshold_db;
  rep.tolerance_alpha_db = sc.cfg.threshold_db + 10.0;  // alpha = 10 t
  rep.precompute_seconds = sc.precompute_seconds;
  const auto it = precoder.diagnostics.find("realtime_seconds");
  rep.realtime_seconds = (it != precoder.diagnostics.end()) ? it->second : 0.0;
  rep.k_used = precoder.k_used;
  return rep;
}

std::vector<SweepRow> threshold_sweep(const Scenario& sc,
                                      const std::vector<Method>& methods,
                                      const std::vector<double>& t_db_list,
                                      const SocpOptions& socp_opts,
                                      const std::atomic<bool>* cancel,
                                      bool* truncated,
                                      const ProgressFn& progress) {
  if (truncated != nullptr) *truncated = false;
  std::vector<SweepRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t total = t_db_list.size() * methods.size();
  std::size_t done = 0;
  for (const double t_db : t_db_list) {
    rows.push_back({t_db, "threshold", t_db, "reference"});
    rows.push_back({t_db, "alpha_10t", t_db + 10.0, "reference"});
    const ThresholdSpec spec = ThresholdSpec::from_db(t_db);
    for (const Method m : methods) {
      if (cancel_requested(cancel)) {
        if (truncated != nullptr) *truncated = true;
        return rows;
      }
      try {
        const PrecoderResult pr = run_method(sc, m, spec, socp_opts);
        const EvaluationReport rep = evaluate(pr, sc);
        std::string status = "ok";
        if (m == Method::SOCP) {
          status = (pr.diagnostics.at("optimal") == 1.0) ? "ok (certified)"
                                                         : "ok (best-effort)";
        }
        rows.push_back({t_db, to_string(m), rep.fine_grid_max_power_db, status});
      } catch (const std::exception& e) {
        rows.push_back({t_db, to_string(m), nan, std::string("error: ") + e.what()});
      }
      ++done;
      if (progress) progress(done, total);
    }
  }
  return rows;
}

MapResult achievable_power_map(const Scenario& sc, const RectRegion& window,
                               double step, const std::atomic<bool>* cancel,
                               const ProgressFn& progress) {
  MapResult out;
  out.grid = map_grid(window, step);
  out.p_us_db.assign(out.grid.points.size(),
                     std::numeric_limits<double>::quiet_NaN());
  const ThresholdSpec spec = ThresholdSpec::from_db(sc.cfg.threshold_db);
  for (std::size_t i = 0; i < out.grid.points.size(); ++i) {
    if (cancel_requested(cancel)) {
      out.truncated = true;
      return out;
    }
    try {
      const SteeringVector a_c = steering_vector(sc.cfg.array, out.grid.points[i]);
      const arma::cx_vec c_user = sc.basis.left_vectors.t() * a_c.entries;
      const PrecoderResult pr =
          detail::dosp_search(sc.basis, a_c.entries, c_user, spec, sc.A);
      out.p_us_db[i] = power_db(pr.diagnostics.at("user_power"));
    } catch (const std::exception&) {
      // Infeasible or singular cell: leave NaN and continue.
    }
    if (progress) progress(i + 1, out.grid.points.size());
  }
  return out;
}

std::vector<TimingRow> timing_benchmark(const Scenario& sc,
                                        const std::vector<Method>& methods,
                                        int repetitions,
                                        const SocpOptions& socp_opts) {
  if (repetitions < 3) {
    throw std::invalid_argument("timing_benchmark: repetitions must be >= 3");
  }
  const ThresholdSpec spec = ThresholdSpec::from_db(sc.cfg.threshold_db);
  std::vector<TimingRow> rows;
  for (const Method m : methods) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      const PrecoderResult pr = run_method(sc, m, spec, socp_opts);
      times.push_back(pr.diagnostics.at("realtime_seconds"));
    }
    TimingRow row;
    row.method = to_string(m);
    row.precompute_seconds = (m == Method::MRT) ? 0.0 : sc.precompute_seconds;
    row.realtime_seconds = median(times);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<arma::uword, double>> spectrum_rows(const Scenario& sc) {
  const arma::vec& s = sc.basis.singular_values;
  std::vector<std::pair<arma::uword, double>> rows;
  rows.reserve(s.n_elem);
  for (arma::uword j = 0; j < s.n_elem; ++j) {
    rows.emplace_back(j + 1, s(j) / s(0));
  }
  return rows;
}

}  // namespace nfler
