#pragma once

#include <stdexcept>
#include <string>

namespace pomc {

enum class ErrorCode {
  invalid_prefix,
  zero_mass_observation,
  zero_mass_history,
  unknown_agent,
  unknown_state,
  unknown_proposition,
  unknown_letter,
  unknown_observation,
  empty_word,
  unsupported_second_order,
  unsupported_unbounded,
  horizon_too_small,
  unbounded_quantifier,
  unbound_variable,
  dimension_mismatch,
  parse_error,
  invalid_model,
  zero_polynomial,
  invalid_argument,
  io_error,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type; `code` is stable and machine-checkable.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace pomc
