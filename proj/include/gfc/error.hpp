#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfc {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  unbounded_integrand,
  resolution_too_coarse,
  neither_compact,
  smoothness_exceeded,
  step_underflow,
  divergent_family,
  battery_class_mismatch,
  verification_failed,
  support_violation,
  oscillatory_resolution,
  singular_quadrature,
  unknown_name,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::unbounded_integrand: return "unbounded-integrand";
    case ErrorKind::resolution_too_coarse: return "resolution-too-coarse";
    case ErrorKind::neither_compact: return "neither-compact";
    case ErrorKind::smoothness_exceeded: return "smoothness-exceeded";
    case ErrorKind::step_underflow: return "step-underflow";
    case ErrorKind::divergent_family: return "divergent-family";
    case ErrorKind::battery_class_mismatch: return "battery-class-mismatch";
    case ErrorKind::verification_failed: return "verification-failed";
    case ErrorKind::support_violation: return "support-violation";
    case ErrorKind::oscillatory_resolution: return "oscillatory-resolution";
    case ErrorKind::singular_quadrature: return "singular-quadrature";
    case ErrorKind::unknown_name: return "unknown-name";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace gfc
