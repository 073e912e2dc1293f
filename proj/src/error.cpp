#include "bcreg/error.hpp"

namespace bcreg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::NonPositiveB1: return "NonPositiveB1";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::AllMembersDegenerate: return "AllMembersDegenerate";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::MissingResponse: return "MissingResponse";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
  }
  return "Unknown";
}

}  // namespace bcreg
