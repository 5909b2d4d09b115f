#include "pomc/error.hpp"

namespace pomc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_prefix: return "invalid_prefix";
    case ErrorCode::zero_mass_observation: return "zero_mass_observation";
    case ErrorCode::zero_mass_history: return "zero_mass_history";
    case ErrorCode::unknown_agent: return "unknown_agent";
    case ErrorCode::unknown_state: return "unknown_state";
    case ErrorCode::unknown_proposition: return "unknown_proposition";
    case ErrorCode::unknown_letter: return "unknown_letter";
    case ErrorCode::unknown_observation: return "unknown_observation";
    case ErrorCode::empty_word: return "empty_word";
    case ErrorCode::unsupported_second_order: return "unsupported_second_order";
    case ErrorCode::unsupported_unbounded: return "unsupported_unbounded";
    case ErrorCode::horizon_too_small: return "horizon_too_small";
    case ErrorCode::unbounded_quantifier: return "unbounded_quantifier";
    case ErrorCode::unbound_variable: return "unbound_variable";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::invalid_model: return "invalid_model";
    case ErrorCode::zero_polynomial: return "zero_polynomial";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown_error";
}

} // namespace pomc
