#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varpen {

/// Failure categories raised by the library. The CLI maps each one to an
/// exit code, so new kinds must also be added to the dispatcher.
enum class ErrorKind {
  ParseError,
  ZeroDenominator,
  ValidationError,
  InvalidArgument,
  SingularMatrix,
  ZeroEcPresent,
  InfiniteExpectation,
  EndComponentPresent,
  NegativeWeight,
  NonPositiveLambda,
  MissingTailValue,
  ZeroVisitDivision,
  TailMismatch,
  BoundTooLarge,
  EpsOutOfRange,
  StepLimitExceeded,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace varpen
