#include "contagion/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "contagion/errors.hpp"

namespace contagion {

namespace {

// Splits one logical CSV record starting at pos. Returns the fields and
// advances pos past the record's trailing newline. Quoted fields may contain
// commas, newlines, and "" escapes.
std::vector<std::string> split_record(std::string_view text, std::size_t& pos,
                                      std::size_t& line, std::size_t line_start) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (;;) {
    if (pos >= text.size()) {
      if (quoted) fail(errc::parse_error, "unterminated quoted field at line " + std::to_string(line_start));
      fields.push_back(std::move(field));
      return fields;
    }
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          quoted = false;
          ++pos;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
        ++pos;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        ++pos;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        ++pos;
        break;
      case '\r':
        ++pos;
        break;
      case '\n':
        ++pos;
        ++line;
        fields.push_back(std::move(field));
        return fields;
      default:
        field.push_back(c);
        ++pos;
    }
  }
}

}  // namespace

csv_table parse_csv(std::string_view text) {
  csv_table table;
  std::size_t pos = 0;
  std::size_t line = 1;
  bool first = true;
  while (pos < text.size()) {
    std::size_t record_line = line;
    auto fields = split_record(text, pos, line, record_line);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
      table.line_numbers.push_back(record_line);
    }
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(errc::io_error, "read failed for " + path);
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) fail(errc::io_error, "write failed for " + path);
}

csv_table read_csv_file(const std::string& path) {
  try {
    return parse_csv(read_text_file(path));
  } catch (const error& e) {
    if (e.code() == errc::parse_error) fail(errc::parse_error, path + ": " + e.what());
    throw;
  }
}

std::string csv_quote(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += csv_quote(fields[i]);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) fail(errc::internal_error, "double formatting failed");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace contagion
