#include "proxyrank/csv.hpp"

#include <fstream>
#include <sstream>

#include "proxyrank/errors.hpp"

namespace proxyrank::csv {

std::vector<std::string> split_line(std::string_view line, char separator) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool at_start = true;  // quotes only open a quoted field as its first character
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && at_start) {
      quoted = true;
    } else if (c == separator) {
      out.push_back(std::move(field));
      field.clear();
      at_start = true;
      continue;
    } else {
      field += c;
    }
    at_start = false;
  }
  out.push_back(std::move(field));
  return out;
}

std::vector<std::string> split_list(std::string_view field, char separator) {
  std::vector<std::string> out;
  if (field.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = field.find(separator, start);
    auto item = field.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Table Table::parse(std::string_view text, char separator) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      // Tolerate a UTF-8 byte order mark.
      if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      t.header_ = split_line(line, separator);
      have_header = true;
      continue;
    }
    t.rows_.push_back(Record{line_no, split_line(line, separator)});
  }
  return t;
}

Table Table::read(const std::filesystem::path& path, char separator) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), separator);
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::string escape(std::string_view field, char separator) {
  if (field.find_first_of(std::string{separator} + "\"\n\r") == std::string_view::npos)
    return std::string{field};
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_row(const std::vector<std::string>& fields, char separator) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += separator;
    out += escape(fields[i], separator);
  }
  return out;
}

}  // namespace proxyrank::csv
