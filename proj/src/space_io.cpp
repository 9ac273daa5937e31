#include "metriclab/space_io.hpp"
#include "metriclab/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace metriclab {

namespace {
constexpr const char* kModule = "metric_core";
using nlohmann::json;
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // fold -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round12(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(format_number(value).c_str(), nullptr);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

FiniteMetricSpace parse_space_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte index just past the offending character
        auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        fail(ErrorKind::malformed_input, kModule,
             "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(column));
    }
    if (!doc.is_object() || !doc.contains("dist") || !doc["dist"].is_array()) {
        fail(ErrorKind::malformed_input, kModule, "space JSON needs a \"dist\" array");
    }
    const auto& rows_json = doc["dist"];
    const std::size_t n = rows_json.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows_json[i];
        if (!row.is_array() || row.size() != n) {
            fail(ErrorKind::malformed_input, kModule, "dist row " + std::to_string(i) + " is not of length " + std::to_string(n));
        }
        for (const auto& v : row) {
            if (!v.is_number()) fail(ErrorKind::malformed_input, kModule, "dist entries must be numbers");
            flat.push_back(v.get<double>());
        }
    }
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        const auto& lj = doc["labels"];
        if (!lj.is_array() || lj.size() != n) {
            fail(ErrorKind::malformed_input, kModule, "labels must be an array of length " + std::to_string(n));
        }
        for (const auto& l : lj) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    } else {
        labels = index_labels(n);
    }
    FiniteMetricSpace m(std::move(labels), std::move(flat));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > kMetricTolerance) {
                fail(ErrorKind::malformed_input, kModule,
                     "asymmetric distance at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
    return m;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::malformed_input, "cli", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FiniteMetricSpace read_space_json(const std::filesystem::path& path) {
    return parse_space_json(read_text_file(path));
}

std::string space_to_json(const FiniteMetricSpace& m) {
    json doc;
    doc["labels"] = m.labels();
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (double v : m.row(i)) row.push_back(round12(v));
        rows.push_back(std::move(row));
    }
    doc["dist"] = std::move(rows);
    return doc.dump() + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::domain, "cli", "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) fail(ErrorKind::domain, "cli", "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::domain, "cli", "cannot move output into place: " + path.string());
    }
}

}  // namespace metriclab
