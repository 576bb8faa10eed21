#include "rotkit/errors.hpp"

namespace rotkit {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SpineNotTiled: return "SpineNotTiled";
    case ErrorKind::MultiAttachComponent: return "MultiAttachComponent";
    case ErrorKind::AttachAtZero: return "AttachAtZero";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotEscaping: return "NotEscaping";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::NoLoop: return "NoLoop";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NotCombed: return "NotCombed";
    case ErrorKind::IrrationalEndpoint: return "IrrationalEndpoint";
    case ErrorKind::ChainBroken: return "ChainBroken";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace rotkit
