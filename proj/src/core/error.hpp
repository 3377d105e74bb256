#pragma once

#include <stdexcept>
#include <string>

namespace cvtele {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  unphysical,
  not_symplectic,
  parse_error,
  truncation,
  degenerate_distribution,
  numerical,
};

// Single exception type for the core; the C API maps `code()` onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(what), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }

  // Diagnostic payload: min eigenvalue for unphysical states, achieved deficit
  // for truncation errors.
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace cvtele
