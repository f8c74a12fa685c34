#pragma once

#include <stdexcept>
#include <string>

namespace maierlab {

/// Machine-readable failure categories surfaced through the CLI as JSON.
enum class errc {
  overflow,
  system_too_large,
  budget_exceeded,
  cutoff_too_small,
  even_n,
  invalid_step,
  out_of_range,
  range_too_short,
  range_too_wide,
  base_primes_insufficient,
  degenerate_profile,
  u_out_of_table,
  lambda_too_large,
  config_infeasible,
  range_error,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::overflow: return "OVERFLOW";
    case errc::system_too_large: return "SYSTEM_TOO_LARGE";
    case errc::budget_exceeded: return "BUDGET_EXCEEDED";
    case errc::cutoff_too_small: return "CUTOFF_TOO_SMALL";
    case errc::even_n: return "EVEN_N";
    case errc::invalid_step: return "INVALID_STEP";
    case errc::out_of_range: return "OUT_OF_RANGE";
    case errc::range_too_short: return "RANGE_TOO_SHORT";
    case errc::range_too_wide: return "RANGE_TOO_WIDE";
    case errc::base_primes_insufficient: return "BASE_PRIMES_INSUFFICIENT";
    case errc::degenerate_profile: return "DEGENERATE_PROFILE";
    case errc::u_out_of_table: return "U_OUT_OF_TABLE";
    case errc::lambda_too_large: return "LAMBDA_TOO_LARGE";
    case errc::config_infeasible: return "CONFIG_INFEASIBLE";
    case errc::range_error: return "RANGE_ERROR";
    case errc::parse_error: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace maierlab
