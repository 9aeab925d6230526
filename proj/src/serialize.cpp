// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// CSV / JSON serialization helpers.

#include "nfler/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nfler {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void write_csv(const std::string& path, const std::string& config_hash,
               const std::vector<std::string>& extra_header_lines,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<CsvCell>>& rows, bool truncated) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  out << "# toolkit: " << kToolkitName << " " << kToolkitVersion << "\n";
  out << "# config_hash: " << config_hash << "\n";
  for (const auto& line : extra_header_lines) out << "# " << line << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        out << format_g17(*d);
      } else if (const auto* u = std::get_if<arma::uword>(&row[i])) {
        out << *u;
      } else {
        out << std::get<std::string>(row[i]);
      }
      out << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
  if (truncated) out << "# TRUNCATED: run interrupted before completion\n";
  if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

nlohmann::json cx_vec_to_json(const arma::cx_vec& v) {
  std::vector<double> flat;
  flat.reserve(2 * v.n_elem);
  for (arma::uword i = 0; i < v.n_elem; ++i) {
    flat.push_back(v(i).real());
    flat.push_back(v(i).imag());
  }
  return nlohmann::json(flat);
}

arma::cx_vec cx_vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() % 2 != 0) {
    throw std::invalid_argument(
        "cx_vec_from_json: expected interleaved [re, im, ...] array");
  }
  arma::cx_vec v(j.size() / 2);
  for (arma::uword i = 0; i < v.n_elem; ++i) {
    v(i) = std::complex<double>(j[2 * i].get<double>(), j[2 * i + 1].get<double>());
  }
  return v;
}

nlohmann::json to_json(const PrecoderResult& r) {
  nlohmann::json j;
  j["method"] = to_string(r.method);
  j["weights"] = cx_vec_to_json(r.weights);
  if (r.k_used.has_value()) {
    j["k_used"] = *r.k_used;
  } else {
    j["k_used"] = nullptr;
  }
  j["diagnostics"] = nlohmann::json::object();
  for (const auto& [key, value] : r.diagnostics) j["diagnostics"][key] = value;
  return j;
}

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["p_us_rel_mrt"] = r.p_us_rel_mrt;
  j["grid_max_power_db"] = r.grid_max_power_db;
  j["fine_grid_max_power_db"] = r.fine_grid_max_power_db;
  j["threshold_db"] = r.threshold_db;
  j["tolerance_alpha_db"] = r.tolerance_alpha_db;
  j["precompute_seconds"] = r.precompute_seconds;
  j["realtime_seconds"] = r.realtime_seconds;
  if (r.k_used.has_value()) {
    j["k_used"] = *r.k_used;
  } else {
    j["k_used"] = nullptr;
  }
  return j;
}

nlohmann::json error_json(const std::string& type, const std::string& message) {
  return nlohmann::json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace nfler
