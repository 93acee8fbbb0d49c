#include "extremefit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "extremefit/errors.hpp"

namespace extremefit::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_finite(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

void write_json(std::ostringstream& out, const nlohmann::json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{" << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << "," << nl;
        first = false;
        out << pad << nlohmann::json(key).dump() << colon;
        write_json(out, value, indent, depth + 1);
      }
      out << nl << close_pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << "," << nl;
        out << pad;
        write_json(out, j[i], indent, depth + 1);
      }
      out << nl << close_pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string to_json_text(const nlohmann::json& doc, int indent) {
  std::ostringstream out;
  write_json(out, doc, indent, 0);
  out << "\n";
  return out.str();
}

NumericTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_line(line);

  std::vector<std::vector<std::string>> cells;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_number;
    auto row = split_line(line);
    if (row.size() != header.size()) {
      throw ConfigError(path.string() + ": data row " + std::to_string(row_number) + " has " +
                        std::to_string(row.size()) + " cells, header has " +
                        std::to_string(header.size()));
    }
    cells.push_back(std::move(row));
  }

  const std::size_t ncol = header.size();
  std::vector<std::vector<std::optional<double>>> parsed(cells.size(),
                                                         std::vector<std::optional<double>>(ncol));
  std::vector<bool> any_numeric(ncol, false);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < ncol; ++c) {
      parsed[r][c] = parse_finite(cells[r][c]);
      if (parsed[r][c]) any_numeric[c] = true;
    }
  }

  NumericTable table;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < ncol; ++c) {
    if (any_numeric[c] || cells.empty()) {
      keep.push_back(c);
      table.columns.push_back(header[c]);
    }
  }
  std::string bad_rows;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::vector<double> row;
    bool ok = true;
    for (std::size_t c : keep) {
      if (!parsed[r][c]) {
        ok = false;
        break;
      }
      row.push_back(*parsed[r][c]);
    }
    if (!ok) {
      bad_rows += (bad_rows.empty() ? "" : ", ") + std::to_string(r + 1);
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  if (!bad_rows.empty()) {
    throw ConfigError(path.string() + ": unparsable or non-finite cells in data rows " + bad_rows);
  }
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write " + path.string());
  file << text;
  if (!file) throw ConfigError("failed writing " + path.string());
}

}  // namespace extremefit::io
