#include "contagion/months.hpp"

#include <charconv>

namespace contagion {

namespace {

std::optional<int> parse_fixed_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace

std::optional<month_t> parse_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  auto year = parse_fixed_int(text.substr(0, 4));
  auto mon = parse_fixed_int(text.substr(5, 2));
  if (!year || !mon || *mon < 1 || *mon > 12) return std::nullopt;
  return static_cast<month_t>(*year * 12 + (*mon - 1));
}

std::string format_month(month_t m) {
  int year = m / 12;
  int mon = m % 12 + 1;
  char buf[8];
  buf[0] = static_cast<char>('0' + year / 1000 % 10);
  buf[1] = static_cast<char>('0' + year / 100 % 10);
  buf[2] = static_cast<char>('0' + year / 10 % 10);
  buf[3] = static_cast<char>('0' + year % 10);
  buf[4] = '-';
  buf[5] = static_cast<char>('0' + mon / 10);
  buf[6] = static_cast<char>('0' + mon % 10);
  buf[7] = '\0';
  return buf;
}

std::optional<month_range> parse_month_range(std::string_view text) {
  auto sep = text.find("..");
  if (sep == std::string_view::npos) {
    auto single = parse_month(text);
    if (!single) return std::nullopt;
    return month_range{*single, *single};
  }
  auto first = parse_month(text.substr(0, sep));
  auto last = parse_month(text.substr(sep + 2));
  if (!first || !last || *first > *last) return std::nullopt;
  return month_range{*first, *last};
}

}  // namespace contagion
