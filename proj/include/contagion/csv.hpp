#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace contagion {

struct csv_table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

// RFC-4180-ish: comma separated, optional double quotes with "" escapes,
// trailing \r tolerated. Throws error(parse_error) on malformed quoting and
// error(io_error) if the file cannot be read.
csv_table parse_csv(std::string_view text);
csv_table read_csv_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Quote a field only when it needs it, join with commas.
std::string csv_quote(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

// Shortest decimal that parses back to the same double ("round-trip" form);
// keeps golden files stable across runs and platforms.
std::string format_double(double v);

// Strict full-field parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

}  // namespace contagion
