// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Scenario config parsing (INI-style) and config hashing.

#include "nfler/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nfler/errors.hpp"

namespace nfler {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' has malformed numeric value '" +
                    value + "'");
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (trim(value.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' has malformed integer value '" +
                    value + "'");
}

std::pair<double, double> parse_pair(const std::string& value,
                                     const std::string& key) {
  const std::size_t comma = value.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("config: key '" + key + "' expects 'x,y', got '" + value +
                      "'");
  }
  return {parse_double(trim(value.substr(0, comma)), key),
          parse_double(trim(value.substr(comma + 1)), key)};
}

}  // namespace

ScenarioConfig load_config(const std::string& path, std::string* warning) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");

  ScenarioConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "array" && section != "ler" && section != "user" &&
          section != "run") {
        throw ConfigError("config: unknown section '[" + section + "]'");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (section == "array") {
      if (key == "n_antennas") {
        cfg.array.n_antennas = static_cast<arma::uword>(parse_u64(value, qual));
      } else if (key == "spacing") {
        cfg.array.spacing = parse_double(value, qual);
      } else if (key == "axis") {
        if (value == "y") {
          cfg.array.axis = {0.0, 1.0};
        } else if (value == "x") {
          cfg.array.axis = {1.0, 0.0};
        } else {
          const auto [ax, ay] = parse_pair(value, qual);
          cfg.array.axis = {ax, ay};
        }
      } else if (key == "center") {
        const auto [cx, cy] = parse_pair(value, qual);
        cfg.array.center = {cx, cy};
      } else {
        throw ConfigError("config: unknown key '" + qual + "'");
      }
    } else if (section == "ler") {
      if (key == "x_min") {
        cfg.ler.x_min = parse_double(value, qual);
      } else if (key == "x_max") {
        cfg.ler.x_max = parse_double(value, qual);
      } else if (key == "y_min") {
        cfg.ler.y_min = parse_double(value, qual);
      } else if (key == "y_max") {
        cfg.ler.y_max = parse_double(value, qual);
      } else if (key == "delta") {
        cfg.delta = parse_double(value, qual);
      } else if (key == "delta_fine") {
        cfg.delta_fine = parse_double(value, qual);
      } else {
        throw ConfigError("config: unknown key '" + qual + "'");
      }
    } else if (section == "user") {
      if (key == "x") {
        cfg.user.x = parse_double(value, qual);
      } else if (key == "y") {
        cfg.user.y = parse_double(value, qual);
      } else {
        throw ConfigError("config: unknown key '" + qual + "'");
      }
    } else if (section == "run") {
      if (key == "threshold_db") {
        cfg.threshold_db = parse_double(value, qual);
      } else if (key == "sigma_th_rel") {
        cfg.sigma_th_rel = parse_double(value, qual);
      } else if (key == "carrier_ghz") {
        cfg.carrier_ghz = parse_double(value, qual);
      } else if (key == "seed") {
        cfg.seed = parse_u64(value, qual);
      } else {
        throw ConfigError("config: unknown key '" + qual + "'");
      }
    } else {
      throw ConfigError("config: key '" + key + "' appears before any section");
    }
  }

  try {
    validate(cfg.array);
    validate(cfg.ler);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.delta > 0.0) || !(cfg.delta_fine > 0.0)) {
    throw ConfigError("config: delta and delta_fine must be positive");
  }
  if (cfg.delta_fine >= cfg.delta) {
    throw ConfigError("config: delta_fine must be smaller than delta");
  }
  if (!(cfg.threshold_db < 0.0)) {
    throw ConfigError("config: threshold_db must be negative (dB relative to MRT)");
  }
  if (!(cfg.sigma_th_rel > 0.0) || !(cfg.sigma_th_rel < 1.0)) {
    throw ConfigError("config: sigma_th_rel must lie in (0, 1)");
  }
  if (warning != nullptr) {
    warning->clear();
    if (cfg.user.x >= cfg.ler.x_min && cfg.user.x <= cfg.ler.x_max &&
        cfg.user.y >= cfg.ler.y_min && cfg.user.y <= cfg.ler.y_max) {
      *warning = "user position lies inside the low-exposure region; the "
                 "threshold caps the user's own power";
    }
  }
  return cfg;
}

std::string config_hash_bytes(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : bytes) {
    h ^= static_cast<std::uint64_t>(ch);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string config_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_hash_bytes(ss.str());
}

}  // namespace nfler
