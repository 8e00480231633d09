#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hexatope {

/// Thrown when an exact search would exceed its configured state or node cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of searches that may give up before deciding.
enum class Verdict : std::uint8_t { False, True, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "unknown";
  }
}

}  // namespace hexatope
