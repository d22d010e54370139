#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cpa/cp_interface.hpp"

namespace cpa::io {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Dense-text format: first line d, then d lines of d reals. The matrix must
/// be symmetric within 1e-12 relative to max|M_kl|. Errors name the line and
/// column of the offending token.
SymMatrix parse_dense_text(std::string_view text);

/// {"dim": d, "rows": [[...], ...]} with the same symmetry rule.
SymMatrix parse_json_matrix(std::string_view text);

/// Chooses the JSON parser for *.json files or content starting with '{'.
SymMatrix read_matrix_file(const std::filesystem::path& path);

/// "d\nrow1\n...\nrow_d" with no trailing newline; round-trips exactly.
std::string to_dense_text(const SymMatrix& m);

nlohmann::json to_json_matrix(const SymMatrix& m);

/// Writes `content` to `path`; throws Error if the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Certificate document: verdict, objective, solver, oracle_calls,
/// feasible_hits, lower_bound, gap, near_boundary, cut_matrix (dense-text
/// block or null), gap_trace, message.
nlohmann::json certificate_to_json(const Certificate& cert);

}  // namespace cpa::io
