#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace vqc::io {

/// Plain comma-separated table (no quoting; the artifacts never contain commas in fields).
struct CsvTable {
  std::filesystem::path source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(std::string_view name) const;  // throws DataError
  [[nodiscard]] bool has_column(std::string_view name) const;
  void require_columns(std::initializer_list<std::string_view> names) const;

  [[nodiscard]] const std::string& cell(std::size_t row, std::string_view name) const;
  [[nodiscard]] double number(std::size_t row, std::string_view name) const;
  [[nodiscard]] long long integer(std::size_t row, std::string_view name) const;
  [[nodiscard]] bool flag(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, const std::filesystem::path& source = {});

/// "file.csv row N: " (1-based data row, header excluded).
std::string row_context(const std::filesystem::path& path, std::size_t row);

double parse_double(std::string_view s);  // throws std::invalid_argument
long long parse_int(std::string_view s);

/// Shortest round-trippable decimal for a double.
std::string format_double(double v);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace vqc::io
