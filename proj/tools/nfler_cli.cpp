// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Command-line entry point.  Subcommands: run, sweep, spectrum, map.
// Errors are machine-readable JSON on stderr; exit codes: 0 success,
// 1 runtime failure, 2 config/usage error, 3 infeasibility/degeneracy,
// 130 interrupted.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "nfler/errors.hpp"
#include "nfler/eval.hpp"
#include "nfler/scenario.hpp"
#include "nfler/serialize.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInterrupted = 130;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

void set_threads(int n) {
  if (n <= 0) return;
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
  if (openblas_set_num_threads != nullptr) openblas_set_num_threads(n);
}

int active_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const std::size_t colon = line.find(':');
      if (colon != std::string::npos) {
        std::string name = line.substr(colon + 1);
        name.erase(0, name.find_first_not_of(' '));
        return name;
      }
    }
  }
  return "unknown";
}

void emit_error(const std::string& type, const std::string& message) {
  std::cerr << nfler::error_json(type, message).dump() << "\n";
}

void progress_line(const std::string& stage, std::size_t done, std::size_t total) {
  const std::size_t stride = std::max<std::size_t>(1, total / 20);
  if (done == total || done % stride == 0) {
    std::cerr << "# progress: " << stage << " " << done << "/" << total << "\n";
  }
}

nlohmann::json config_json(const nfler::ScenarioConfig& cfg) {
  nlohmann::json j;
  j["array"] = {{"n_antennas", cfg.array.n_antennas},
                {"spacing", cfg.array.spacing},
                {"axis", {cfg.array.axis.x, cfg.array.axis.y}},
                {"center", {cfg.array.center.x, cfg.array.center.y}}};
  j["ler"] = {{"x_min", cfg.ler.x_min}, {"x_max", cfg.ler.x_max},
              {"y_min", cfg.ler.y_min}, {"y_max", cfg.ler.y_max},
              {"delta", cfg.delta},     {"delta_fine", cfg.delta_fine}};
  j["user"] = {cfg.user.x, cfg.user.y};
  j["run"] = {{"threshold_db", cfg.threshold_db},
              {"sigma_th_rel", cfg.sigma_th_rel},
              {"seed", cfg.seed}};
  if (cfg.carrier_ghz.has_value()) j["run"]["carrier_ghz"] = *cfg.carrier_ghz;
  return j;
}

struct LoadedScenario {
  std::string hash;
  nfler::Scenario sc;
};

LoadedScenario load_and_build(const std::string& config_path) {
  LoadedScenario out;
  out.hash = nfler::config_hash(config_path);
  std::string warning;
  const nfler::ScenarioConfig cfg = nfler::load_config(config_path, &warning);
  if (!warning.empty()) std::cerr << "# warning: " << warning << "\n";
  std::cerr << "# progress: building scenario (steering matrix + basis)\n";
  out.sc = nfler::build_scenario(cfg);
  std::cerr << "# progress: precompute done in " << out.sc.precompute_seconds
            << " s (k_init = " << out.sc.basis.k_init << ")\n";
  return out;
}

std::filesystem::path out_file(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return std::filesystem::path(out_dir) / name;
}

nfler::RectRegion parse_window(const std::vector<double>& w) {
  return nfler::RectRegion{w[0], w[1], w[2], w[3]};
}

std::vector<nfler::Method> parse_method_list(const std::string& csv) {
  std::vector<nfler::Method> methods;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) methods.push_back(nfler::method_from_string(token));
  }
  if (methods.empty()) {
    throw nfler::ConfigError("--method: expected at least one method name");
  }
  return methods;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& method_name, const std::vector<double>& window_arg,
            double step_arg, double time_budget) {
  const nfler::Method method = nfler::method_from_string(method_name);
  LoadedScenario ls = load_and_build(config_path);
  const nfler::Scenario& sc = ls.sc;
  const nfler::ThresholdSpec threshold =
      nfler::ThresholdSpec::from_db(sc.cfg.threshold_db);
  if (g_interrupted.load()) return kExitInterrupted;

  nfler::SocpOptions socp_opts;
  socp_opts.time_budget_seconds = time_budget;
  socp_opts.cancel = &g_interrupted;

  std::cerr << "# progress: computing " << nfler::to_string(method)
            << " precoder\n";
  nfler::PrecoderResult pr;
  std::optional<nfler::SocpSolution> socp_sol;
  if (method == nfler::Method::SOCP) {
    const auto t0 = std::chrono::steady_clock::now();
    nfler::SocpProblem problem{sc.A.columns, sc.a_us.entries, threshold.t_linear};
    socp_sol = nfler::solve_p2(problem, socp_opts);
    pr.weights = socp_sol->weights;
    pr.method = nfler::Method::SOCP;
    pr.diagnostics["objective"] = socp_sol->objective;
    pr.diagnostics["user_power"] = socp_sol->objective * socp_sol->objective;
    pr.diagnostics["duality_gap"] = socp_sol->duality_gap;
    pr.diagnostics["iterations"] = static_cast<double>(socp_sol->iterations);
    pr.diagnostics["optimal"] = (socp_sol->status == "optimal") ? 1.0 : 0.0;
    pr.diagnostics["realtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  } else {
    pr = nfler::run_method(sc, method, threshold, socp_opts);
  }
  if (g_interrupted.load()) return kExitInterrupted;

  std::cerr << "# progress: evaluating on coarse and fine grids\n";
  const nfler::EvaluationReport rep = nfler::evaluate(pr, sc);

  nlohmann::json report;
  report["toolkit"] = {{"name", nfler::kToolkitName},
                       {"version", nfler::kToolkitVersion}};
  report["config_hash"] = ls.hash;
  report["config"] = config_json(sc.cfg);
  report["hardware"] = {{"threads", active_threads()}, {"cpu", cpu_model()}};
  report["report"] = nfler::to_json(rep);
  report["precoder"] = nfler::to_json(pr);
  if (socp_sol.has_value()) {
    nfler::SocpProblem problem{sc.A.columns, sc.a_us.entries, threshold.t_linear};
    report["socp"] = {{"solution", nfler::to_json(*socp_sol)},
                      {"kkt", nfler::kkt_residuals(problem, *socp_sol)}};
  }
  const bool truncated = g_interrupted.load();
  report["truncated"] = truncated;
  {
    std::ofstream out(out_file(out_dir, "report.json"));
    out << report.dump(2) << "\n";
  }

  // Beam pattern over the view window (default: LER extended to the user).
  nfler::RectRegion window = sc.cfg.ler;
  if (window_arg.size() == 4) {
    window = parse_window(window_arg);
  } else {
    window.x_min = std::min(window.x_min, sc.cfg.user.x);
    window.x_max = std::max(window.x_max, sc.cfg.user.x);
    window.y_min = std::min(window.y_min, sc.cfg.user.y);
    window.y_max = std::max(window.y_max, sc.cfg.user.y);
  }
  const double step = (step_arg > 0.0) ? step_arg : sc.cfg.delta;
  if (!truncated) {
    std::cerr << "# progress: sampling beam pattern\n";
    const nfler::SampledRegion grid = nfler::sample_region(window, step);
    const arma::vec db =
        nfler::beam_pattern_db(pr.weights, sc.cfg.array, grid.points);
    std::vector<std::vector<nfler::CsvCell>> rows;
    rows.reserve(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      rows.push_back({grid.points[i].x, grid.points[i].y, db(i)});
    }
    nfler::write_csv(
        out_file(out_dir, "pattern.csv").string(), ls.hash,
        {"db_convention: power relative to MRT (0 dB), 10*log10",
         "method: " + nfler::to_string(pr.method)},
        {"x_lambda", "y_lambda", "power_db"}, rows, false);
  }
  return truncated ? kExitInterrupted : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& methods_csv, const std::vector<double>& t_list,
              double time_budget) {
  if (t_list.empty()) {
    throw nfler::ConfigError("--t-list: expected at least one threshold in dB");
  }
  const std::vector<nfler::Method> methods = parse_method_list(methods_csv);
  LoadedScenario ls = load_and_build(config_path);

  nfler::SocpOptions socp_opts;
  socp_opts.time_budget_seconds = time_budget;
  socp_opts.cancel = &g_interrupted;

  bool truncated = false;
  const auto rows = nfler::threshold_sweep(
      ls.sc, methods, t_list, socp_opts, &g_interrupted, &truncated,
      [](std::size_t done, std::size_t total) {
        progress_line("sweep", done, total);
      });

  std::vector<std::vector<nfler::CsvCell>> cells;
  cells.reserve(rows.size());
  for (const auto& row : rows) {
    cells.push_back({row.t_db, row.method, row.fine_max_db, row.status});
  }
  nfler::write_csv(out_file(out_dir, "sweep.csv").string(), ls.hash,
                   {"db_convention: power relative to MRT (0 dB), 10*log10",
                    "fine_max_db: maximum LER power on the delta_fine grid"},
                   {"t_db", "method", "fine_max_db", "status"}, cells, truncated);
  return truncated ? kExitInterrupted : kExitOk;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_dir) {
  LoadedScenario ls = load_and_build(config_path);
  const auto rows = nfler::spectrum_rows(ls.sc);
  std::vector<std::vector<nfler::CsvCell>> cells;
  cells.reserve(rows.size());
  for (const auto& [j, rel] : rows) {
    cells.push_back({j, rel});
  }
  std::ostringstream k_line;
  k_line << "k_init: " << ls.sc.basis.k_init
         << " (sigma_th_rel = " << nfler::format_g17(ls.sc.cfg.sigma_th_rel)
         << ")";
  nfler::write_csv(out_file(out_dir, "spectrum.csv").string(), ls.hash,
                   {"sigma_rel: singular values of the LER steering matrix, "
                    "relative to the largest, descending",
                    k_line.str()},
                   {"j", "sigma_rel"}, cells, false);
  return kExitOk;
}

int cmd_map(const std::string& config_path, const std::string& out_dir,
            const std::vector<double>& window_arg, double step_arg) {
  LoadedScenario ls = load_and_build(config_path);
  const nfler::RectRegion window =
      (window_arg.size() == 4) ? parse_window(window_arg) : ls.sc.cfg.ler;
  const double step = (step_arg > 0.0) ? step_arg : ls.sc.cfg.delta;

  const nfler::MapResult map = nfler::achievable_power_map(
      ls.sc, window, step, &g_interrupted,
      [](std::size_t done, std::size_t total) {
        progress_line("map", done, total);
      });

  std::vector<std::vector<nfler::CsvCell>> cells;
  cells.reserve(map.p_us_db.size());
  for (std::size_t i = 0; i < map.p_us_db.size(); ++i) {
    cells.push_back(
        {map.grid.points[i].x, map.grid.points[i].y, map.p_us_db[i]});
  }
  nfler::write_csv(out_file(out_dir, "map.csv").string(), ls.hash,
                   {"db_convention: power relative to MRT (0 dB), 10*log10",
                    "p_us_db: achievable DoSP user power; nan = infeasible cell"},
                   {"x_lambda", "y_lambda", "p_us_db"}, cells, map.truncated);
  return map.truncated ? kExitInterrupted : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);

  CLI::App app{"nfler: near-field low-exposure-region precoding toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string method = "dosp";
  std::vector<double> t_list;
  std::vector<double> window_arg;
  double step_arg = 0.0;
  double time_budget = 0.0;
  int threads = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config file")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory (default: .)");
    cmd->add_option("--threads", threads, "Worker thread count (default: auto)");
  };

  CLI::App* run = app.add_subcommand(
      "run", "Run one precoder; writes report.json and pattern.csv");
  add_common(run);
  run->add_option("--method", method, "mrt | zf | dosp | ridge | socp");
  run->add_option("--window", window_arg,
                  "Pattern window x0,x1,y0,y1 (default: LER extended to user)")
      ->delimiter(',')
      ->expected(4);
  run->add_option("--step", step_arg, "Pattern grid step in lambda");
  run->add_option("--time-budget", time_budget, "SOCP time budget in seconds");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Threshold sweep; writes sweep.csv");
  add_common(sweep);
  sweep->add_option("--method", method,
                    "Comma-separated method list (default: dosp)");
  sweep->add_option("--t-list", t_list, "Thresholds in dB, e.g. --t-list=-70,-80")
      ->delimiter(',')
      ->required();
  sweep->add_option("--time-budget", time_budget, "SOCP time budget in seconds");

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Singular-value spectrum; writes spectrum.csv");
  add_common(spectrum);

  CLI::App* map_cmd = app.add_subcommand(
      "map", "Achievable-power map over candidate users; writes map.csv");
  add_common(map_cmd);
  map_cmd->add_option("--window", window_arg, "Candidate window x0,x1,y0,y1")
      ->delimiter(',')
      ->expected(4);
  map_cmd->add_option("--step", step_arg, "Candidate grid step in lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage_error", e.what());
    return kExitUsage;
  }

  set_threads(threads);

  try {
    if (app.got_subcommand(run)) {
      return cmd_run(config_path, out_dir, method, window_arg, step_arg,
                     time_budget);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(config_path, out_dir, method, t_list, time_budget);
    }
    if (app.got_subcommand(spectrum)) {
      return cmd_spectrum(config_path, out_dir);
    }
    return cmd_map(config_path, out_dir, window_arg, step_arg);
  } catch (const nfler::ConfigError& e) {
    emit_error("config_error", e.what());
    return kExitUsage;
  } catch (const nfler::InfeasibleError& e) {
    emit_error("infeasible", e.what());
    return kExitInfeasible;
  } catch (const nfler::DegenerateSubspaceError& e) {
    emit_error("degenerate_subspace", e.what());
    return kExitInfeasible;
  } catch (const nfler::NullProjectionError& e) {
    emit_error("null_projection", e.what());
    return kExitInfeasible;
  } catch (const nfler::SingularGeometryError& e) {
    emit_error("singular_geometry", e.what());
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    emit_error("invalid_argument", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error("runtime_error", e.what());
    return kExitFail;
  }
}
