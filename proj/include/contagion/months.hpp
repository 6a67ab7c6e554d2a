#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace contagion {

// Calendar months are held as a linear index (year*12 + month - 1) so gap
// lengths and interpolation weights are plain integer arithmetic.
using month_t = std::int32_t;

std::optional<month_t> parse_month(std::string_view text);  // "YYYY-MM"
std::string format_month(month_t m);

// Inclusive range. "2015-04..2017-03" or a bare "2015-04" (first == last).
struct month_range {
  month_t first;
  month_t last;

  bool contains(month_t m) const { return first <= m && m <= last; }
};

std::optional<month_range> parse_month_range(std::string_view text);

}  // namespace contagion
