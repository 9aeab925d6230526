// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Scenario configuration: INI-style key/value file with sections
// [array], [ler], [user], [run].  See configs/scenario_paper.cfg.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nfler/geometry.hpp"
#include "nfler/region.hpp"

namespace nfler {

struct ScenarioConfig {
  ArrayGeometry array;
  RectRegion ler = default_scenario_region();
  double delta = 5.0;         // design sampling step, lambda
  double delta_fine = 0.25;   // verification sampling step, lambda
  Point2D user{2200.0, -200.0};
  double threshold_db = -80.0;   // t relative to MRT, dB (< 0)
  double sigma_th_rel = 1e-10;
  std::optional<double> carrier_ghz;  // labels only
  std::uint64_t seed = 1;
};

// Parses and validates a config file.  Violations (threshold_db >= 0,
// delta_fine >= delta, malformed entries, unknown keys) throw ConfigError.
// A user positioned inside the LER is legal but reported via *warning.
ScenarioConfig load_config(const std::string& path, std::string* warning = nullptr);

// FNV-1a 64-bit hash of the raw config bytes, as 16 hex digits; embedded in
// every output file header so results are traceable to their exact config.
std::string config_hash(const std::string& path);
std::string config_hash_bytes(const std::string& bytes);

}  // namespace nfler
