// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// CSV / JSON output helpers.  Every file starts with a comment header
// embedding the toolkit version and the config hash; numbers are written
// with 17 significant digits so outputs are byte-identical across runs.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include <armadillo>

#include "json.hpp"

#include "nfler/eval.hpp"
#include "nfler/precoder.hpp"

namespace nfler {

inline constexpr const char* kToolkitName = "nfler";
inline constexpr const char* kToolkitVersion = "0.1.0";

// %.17g rendering used for every numeric output.
std::string format_g17(double v);

using CsvCell = std::variant<double, arma::uword, std::string>;

// Writes `# key: value` header lines (version, config hash, dB convention),
// one column-name line, then the data rows.  Appends a trailing
// `# TRUNCATED ...` marker when truncated is true.
void write_csv(const std::string& path, const std::string& config_hash,
               const std::vector<std::string>& extra_header_lines,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<CsvCell>>& rows,
               bool truncated = false);

nlohmann::json to_json(const PrecoderResult& r);
nlohmann::json to_json(const EvaluationReport& r);
nlohmann::json error_json(const std::string& type, const std::string& message);

// Interleaved [re, im, ...] encoding shared by all complex payloads.
nlohmann::json cx_vec_to_json(const arma::cx_vec& v);
arma::cx_vec cx_vec_from_json(const nlohmann::json& j);

}  // namespace nfler
