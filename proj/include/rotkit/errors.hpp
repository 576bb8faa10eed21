#pragma once

#include <stdexcept>
#include <string>

namespace rotkit {

enum class ErrorKind {
  ParseError,
  InvalidInput,
  SpineNotTiled,
  MultiAttachComponent,
  AttachAtZero,
  Disconnected,
  NotEscaping,
  InvalidMap,
  NoLoop,
  TooLarge,
  BudgetExceeded,
  NotMonotone,
  NotCombed,
  IrrationalEndpoint,
  ChainBroken,
  PreconditionViolated,
  NotCoprime,
  Overflow,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rotkit
