#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proxyrank::csv {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Header-addressed table. Quoted fields follow RFC 4180 (doubled quotes, embedded separators).
class Table {
 public:
  static Table parse(std::string_view text, char separator = ',');
  static Table read(const std::filesystem::path& path, char separator = ',');

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<Record>& rows() const noexcept { return rows_; }
  std::optional<std::size_t> column(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<Record> rows_;
};

std::vector<std::string> split_line(std::string_view line, char separator = ',');
std::vector<std::string> split_list(std::string_view field, char separator = ';');

std::string escape(std::string_view field, char separator = ',');
std::string join_row(const std::vector<std::string>& fields, char separator = ',');

}  // namespace proxyrank::csv
