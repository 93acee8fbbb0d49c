#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace extremefit::io {

// 17 significant digits ("%.17g"); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

// JSON text in which every floating-point number carries 17 significant
// digits. Non-finite floats become null. Object keys are sorted.
std::string to_json_text(const nlohmann::json& doc, int indent = 2);

struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header line followed by comma-separated numbers. Columns in which no cell
// parses are treated as labels and dropped; in every other column each cell
// must be a finite number, and all offending data rows (1-based, header
// excluded) are reported in one ConfigError.
NumericTable read_numeric_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace extremefit::io
