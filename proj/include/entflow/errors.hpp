#pragma once

#include <stdexcept>
#include <string>

namespace entflow {

enum class ErrorCode {
  non_finite,
  negative_field,
  nonzero_epsilon,
  singular_symbol,
  quadrature_not_converged,
  pairing_failure,
  clamp_violation,
  no_saturation,
  capacity_exceeded,
  domain_error,
  incompatible_truncation,
  length_mismatch,
  bad_increment,
  requires_symmetry_breaking,
  convergence_failure,
  insufficient_points,
  cache_corrupt,
  invalid_argument,
};

inline const char* to_string(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::negative_field: return "negative_field";
    case ErrorCode::nonzero_epsilon: return "nonzero_epsilon";
    case ErrorCode::singular_symbol: return "singular_symbol";
    case ErrorCode::quadrature_not_converged: return "quadrature_not_converged";
    case ErrorCode::pairing_failure: return "pairing_failure";
    case ErrorCode::clamp_violation: return "clamp_violation";
    case ErrorCode::no_saturation: return "no_saturation";
    case ErrorCode::capacity_exceeded: return "capacity_exceeded";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::incompatible_truncation: return "incompatible_truncation";
    case ErrorCode::length_mismatch: return "length_mismatch";
    case ErrorCode::bad_increment: return "bad_increment";
    case ErrorCode::requires_symmetry_breaking: return "requires_symmetry_breaking";
    case ErrorCode::convergence_failure: return "convergence_failure";
    case ErrorCode::insufficient_points: return "insufficient_points";
    case ErrorCode::cache_corrupt: return "cache_corrupt";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace entflow
