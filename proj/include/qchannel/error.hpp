#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qchannel {

enum class ErrorKind {
  // input / parse failures
  ParseError,
  ShapeMismatch,
  DimMismatch,
  IndexOutOfRange,
  ControlEqualsTarget,
  UnknownGate,
  UnknownCode,
  UnknownBuiltin,
  InvalidParameter,
  WrongArity,
  // mathematical precondition failures
  NotHermitian,
  NotUnitary,
  NotPSD,
  InvalidMeasurement,
  DependentInput,
  ConditionViolated,
  NotTracePreserving,
  NotUnital,
  NotAnAlgebra,
  StructureResolutionFailed,
  PromiseViolated,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ControlEqualsTarget: return "ControlEqualsTarget";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::UnknownCode: return "UnknownCode";
    case ErrorKind::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorKind::DependentInput: return "DependentInput";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NotUnital: return "NotUnital";
    case ErrorKind::NotAnAlgebra: return "NotAnAlgebra";
    case ErrorKind::StructureResolutionFailed: return "StructureResolutionFailed";
    case ErrorKind::PromiseViolated: return "PromiseViolated";
  }
  return "Unknown";
}

/// True for failures caused by malformed or inconsistent input rather than
/// by a mathematical precondition of the requested analysis.
constexpr bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::DimMismatch:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::ControlEqualsTarget:
    case ErrorKind::UnknownGate:
    case ErrorKind::UnknownCode:
    case ErrorKind::UnknownBuiltin:
    case ErrorKind::InvalidParameter:
    case ErrorKind::WrongArity:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace qchannel
