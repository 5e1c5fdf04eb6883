#pragma once

#include <stdexcept>
#include <string>

namespace knotscope {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  OddValue,
  DuplicateMagnitude,
  WrongRange,
  InvalidGauss,
  InvalidDiagram,
  NonRealizable,
  NotAKnot,
  BudgetExceeded,
  NonSquareNorm,
  Disagreement,
  Overflow,
  Io,
  EmptyFile,
  MissingColumn,
  MalformedRow,
  EmptyGroup,
  EmptyInput,
  DegenerateRange,
  DegenerateX,
  TooFewPoints,
  NonpositiveVolume,
  NoConvergence,
  SingularJacobian,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace knotscope
