#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsmt {

enum class ErrorCode {
  parse_error,
  unknown_atom,
  complement_outside_super_power_set,
  frame_mismatch,
  frame_too_large,
  validation_error,
  inadmissible_source,
  fewer_than_two_sources,
  total_conflict,
  non_existential_input,
  divisor_contains_zero,
  zero_cardinal_focal,
  degenerate_epsilon_zero,
  single_atom_frame,
  scale_mismatch,
  divide_by_zero_label,
  empty_conditioning_event,
  zero_plausibility_conditioning,
  invalid_argument,
};

std::string_view error_name(ErrorCode code);

// Input problems (bad files, bad expressions, invalid masses) versus
// failures that happen while a well-formed computation runs.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::parse_error, what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class NonExistentialInputError : public Error {
 public:
  NonExistentialInputError(const std::string& what, double lost_mass,
                           double retained_mass)
      : Error(ErrorCode::non_existential_input, what),
        lost_mass_(lost_mass),
        retained_mass_(retained_mass) {}
  double lost_mass() const noexcept { return lost_mass_; }
  double retained_mass() const noexcept { return retained_mass_; }

 private:
  double lost_mass_;
  double retained_mass_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace dsmt
