#include "dsmt/errors.hpp"

namespace dsmt {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unknown_atom: return "UnknownAtom";
    case ErrorCode::complement_outside_super_power_set: return "ComplementOutsideSuperPowerSet";
    case ErrorCode::frame_mismatch: return "FrameMismatch";
    case ErrorCode::frame_too_large: return "FrameTooLarge";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::inadmissible_source: return "InadmissibleSource";
    case ErrorCode::fewer_than_two_sources: return "FewerThanTwoSources";
    case ErrorCode::total_conflict: return "TotalConflict";
    case ErrorCode::non_existential_input: return "NonExistentialInput";
    case ErrorCode::divisor_contains_zero: return "DivisorContainsZero";
    case ErrorCode::zero_cardinal_focal: return "ZeroCardinalFocal";
    case ErrorCode::degenerate_epsilon_zero: return "DegenerateEpsilonZero";
    case ErrorCode::single_atom_frame: return "SingleAtomFrame";
    case ErrorCode::scale_mismatch: return "ScaleMismatch";
    case ErrorCode::divide_by_zero_label: return "DivideByZeroLabel";
    case ErrorCode::empty_conditioning_event: return "EmptyConditioningEvent";
    case ErrorCode::zero_plausibility_conditioning: return "ZeroPlausibilityConditioning";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::unknown_atom:
    case ErrorCode::complement_outside_super_power_set:
    case ErrorCode::frame_mismatch:
    case ErrorCode::frame_too_large:
    case ErrorCode::validation_error:
    case ErrorCode::inadmissible_source:
    case ErrorCode::fewer_than_two_sources:
    case ErrorCode::scale_mismatch:
    case ErrorCode::invalid_argument:
      return true;
    default:
      return false;
  }
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

}  // namespace dsmt
