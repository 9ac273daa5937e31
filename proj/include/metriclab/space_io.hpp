#pragma once

#include "metriclab/metric_space.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace metriclab {

/// Fixed 12-significant-digit decimal text ("%.12g").
std::string format_number(double value);

/// value rounded to 12 significant digits, so that JSON serialisation of
/// the result is byte-stable.
double round12(double value);

/// Parses {"labels": [...], "dist": [[...]]}. Labels may be strings or
/// numbers; when absent, index labels are used. Rejects non-square,
/// non-finite, or asymmetric (beyond kMetricTolerance) matrices.
/// Syntax errors raise LabError(malformed_input) naming line and column.
FiniteMetricSpace parse_space_json(std::string_view text);
FiniteMetricSpace read_space_json(const std::filesystem::path& path);

std::string space_to_json(const FiniteMetricSpace& m);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so a failed run never leaves a partial output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

/// Translates a byte offset into 1-based (line, column).
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

}  // namespace metriclab
