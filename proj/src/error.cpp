#include "knotscope/error.hpp"

namespace knotscope {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::OddValue: return "OddValue";
  case ErrorCode::DuplicateMagnitude: return "DuplicateMagnitude";
  case ErrorCode::WrongRange: return "WrongRange";
  case ErrorCode::InvalidGauss: return "InvalidGauss";
  case ErrorCode::InvalidDiagram: return "InvalidDiagram";
  case ErrorCode::NonRealizable: return "NonRealizable";
  case ErrorCode::NotAKnot: return "NotAKnot";
  case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  case ErrorCode::NonSquareNorm: return "NonSquareNorm";
  case ErrorCode::Disagreement: return "Disagreement";
  case ErrorCode::Overflow: return "Overflow";
  case ErrorCode::Io: return "Io";
  case ErrorCode::EmptyFile: return "EmptyFile";
  case ErrorCode::MissingColumn: return "MissingColumn";
  case ErrorCode::MalformedRow: return "MalformedRow";
  case ErrorCode::EmptyGroup: return "EmptyGroup";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::DegenerateRange: return "DegenerateRange";
  case ErrorCode::DegenerateX: return "DegenerateX";
  case ErrorCode::TooFewPoints: return "TooFewPoints";
  case ErrorCode::NonpositiveVolume: return "NonpositiveVolume";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::SingularJacobian: return "SingularJacobian";
  }
  return "Unknown";
}

} // namespace knotscope
