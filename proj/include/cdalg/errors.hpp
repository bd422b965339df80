#ifndef CDALG_ERRORS_HPP
#define CDALG_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdalg {

/// Classification used by the CLI to pick exit codes and error JSON.
enum class ErrorKind {
  invalid_level,
  level_mismatch,
  singular,
  pole,
  cut_straddle,
  non_convergence,
  syntax,
  unsupported_shape,
  domain,
  accuracy,
  usage,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_level: return "invalid_level";
    case ErrorKind::level_mismatch: return "level_mismatch";
    case ErrorKind::singular: return "singular";
    case ErrorKind::pole: return "pole";
    case ErrorKind::cut_straddle: return "cut_straddle";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::unsupported_shape: return "unsupported_shape";
    case ErrorKind::domain: return "domain";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

/// Usage-type errors (bad input text, bad level, bad flags) as opposed to
/// numerical/domain failures.
constexpr bool is_usage_error(ErrorKind kind) {
  return kind == ErrorKind::syntax || kind == ErrorKind::usage ||
         kind == ErrorKind::invalid_level;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& detail)
      : Error(ErrorKind::syntax,
              detail + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace cdalg

#endif
