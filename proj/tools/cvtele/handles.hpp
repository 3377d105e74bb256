#pragma once

#include "cvtele/cvtele.h"

#include <memory>
#include <stdexcept>
#include <string>

namespace cvtele::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

struct StateDeleter {
  void operator()(cvt_state* s) const noexcept { cvt_state_free(s); }
};
struct FieldDeleter {
  void operator()(cvt_field* f) const noexcept { cvt_field_free(f); }
};
struct FockDeleter {
  void operator()(cvt_fock* f) const noexcept { cvt_fock_free(f); }
};
struct EnsembleDeleter {
  void operator()(cvt_ensemble* e) const noexcept { cvt_ensemble_free(e); }
};

using StatePtr = std::unique_ptr<cvt_state, StateDeleter>;
using FieldPtr = std::unique_ptr<cvt_field, FieldDeleter>;
using FockPtr = std::unique_ptr<cvt_fock, FockDeleter>;
using EnsemblePtr = std::unique_ptr<cvt_ensemble, EnsembleDeleter>;

// Throws CliError carrying the library's last error message.
inline void check(cvt_status status, const std::string& context, int exit_code = kExitFailure) {
  if (status == CVT_OK) return;
  throw CliError(exit_code, context + ": " + cvt_status_string(status) + ": " +
                                cvt_last_error_message());
}

// Takes ownership of a string allocated by the library.
inline std::string take_string(char* s) {
  std::unique_ptr<char, void (*)(char*)> guard(s, cvt_string_free);
  return s ? std::string(s) : std::string();
}

}  // namespace cvtele::cli
