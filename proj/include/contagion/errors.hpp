#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace contagion {

enum class errc {
  invalid_argument,
  parse_error,
  data_error,
  io_error,
  internal_error,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

// One validation observation. Rejections make a dataset unusable for
// simulation; exclusions drop a single bank per the data rules; notes are
// informational (coverage, counts).
struct finding {
  enum class kind { rejection, exclusion, note };

  kind severity;
  std::string where;    // "file:line", bank id, or month tag
  std::string message;
};

inline bool has_rejections(const std::vector<finding>& findings) {
  for (const auto& f : findings) {
    if (f.severity == finding::kind::rejection) return true;
  }
  return false;
}

}  // namespace contagion
