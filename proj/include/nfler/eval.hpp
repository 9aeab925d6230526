// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Evaluation harness: per-precoder reports, threshold sweeps, the
// achievable-power map and timing benchmarks.

#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nfler/precoder.hpp"
#include "nfler/region.hpp"
#include "nfler/scenario.hpp"
#include "nfler/socp.hpp"

namespace nfler {

// Materialized scenario shared by all evaluation entry points.  The design
// grid, steering matrix and subspace basis are computed once; the basis
// depends only on A and is reused across users and thresholds.
struct Scenario {
  ScenarioConfig cfg;
  SampledRegion coarse;         // LER sampled at delta
  SteeringVector a_us;
  SteeringMatrix A;             // N x Q over the coarse grid
  SubspaceBasis basis;
  double precompute_seconds = 0.0;  // steering matrix + basis build time
};

Scenario build_scenario(const ScenarioConfig& cfg);

struct EvaluationReport {
  std::string method;
  double p_us_rel_mrt = 0.0;          // |w^H a_us|^2, MRT reference 1
  double grid_max_power_db = 0.0;     // max over the delta grid
  double fine_grid_max_power_db = 0.0;  // max over the delta_fine grid
  double threshold_db = 0.0;
  double tolerance_alpha_db = 0.0;    // threshold_db + 10 (alpha = 10 t)
  double precompute_seconds = 0.0;
  double realtime_seconds = 0.0;
  std::optional<arma::uword> k_used;
};

// Runs one precoding method on the scenario threshold (diagnostics record
// the wall time used by evaluate()).
PrecoderResult run_method(const Scenario& sc, Method method,
                          const ThresholdSpec& threshold,
                          const SocpOptions& socp_opts = {});

// Deterministic given the same precoder and scenario.
EvaluationReport evaluate(const PrecoderResult& precoder, const Scenario& sc);

struct SweepRow {
  double t_db = 0.0;
  std::string method;        // method name, or "threshold" / "alpha_10t"
  double fine_max_db = 0.0;  // NaN when status != "ok"
  std::string status;        // "ok", "reference" or "error: ..."
};

// Called after each completed cell with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// For each threshold and method, the fine-grid maximum LER power; reference
// rows carry t and 10t.  Per-cell failures are recorded and the sweep
// continues.  Returns early (partial rows) when *cancel becomes true.
std::vector<SweepRow> threshold_sweep(const Scenario& sc,
                                      const std::vector<Method>& methods,
                                      const std::vector<double>& t_db_list,
                                      const SocpOptions& socp_opts = {},
                                      const std::atomic<bool>* cancel = nullptr,
                                      bool* truncated = nullptr,
                                      const ProgressFn& progress = {});

struct MapResult {
  SampledRegion grid;             // candidate user positions
  std::vector<double> p_us_db;    // achieved DoSP user power; NaN = failed cell
  bool truncated = false;
};

// Treats every grid point as a candidate user; reuses the scenario basis, so
// each cell costs only the k-search.  A step larger than a window side
// collapses that axis to its lower bound (single-cell map), unlike
// sample_region which rejects such steps.
MapResult achievable_power_map(const Scenario& sc, const RectRegion& window,
                               double step,
                               const std::atomic<bool>* cancel = nullptr,
                               const ProgressFn& progress = {});

struct TimingRow {
  std::string method;
  double precompute_seconds = 0.0;  // shared SVD (methods that consume it)
  double realtime_seconds = 0.0;    // median over repetitions
};

std::vector<TimingRow> timing_benchmark(const Scenario& sc,
                                        const std::vector<Method>& methods,
                                        int repetitions,
                                        const SocpOptions& socp_opts = {});

// Singular spectrum rows (j, sigma_j/sigma_1), j = 1..r, non-increasing.
std::vector<std::pair<arma::uword, double>> spectrum_rows(const Scenario& sc);

}  // namespace nfler
