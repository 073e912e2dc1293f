#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcreg {

enum class ErrorCode {
  InvalidSpec,
  InvalidArgument,
  DimensionMismatch,
  RankDeficient,
  CholeskyFailure,
  NonPositiveB1,
  WindowEmpty,
  AllMembersDegenerate,
  BracketFailure,
  ParseError,
  NonNumericCell,
  MissingResponse,
  IoError,
  FormatError,
  UnknownScenario,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Everything the library throws
/// on a contract violation is a bcreg::Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Same code, message prefixed with `context: `.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + what());
  }

 private:
  ErrorCode code_;
};

/// Input-parsing family (CLI exit code 2).
constexpr bool is_input_error(ErrorCode c) noexcept {
  return c == ErrorCode::ParseError || c == ErrorCode::NonNumericCell ||
         c == ErrorCode::MissingResponse || c == ErrorCode::IoError ||
         c == ErrorCode::FormatError;
}

}  // namespace bcreg
