#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace haarlab {

enum class ErrorKind {
  NonPositiveMeasure,
  MassMismatch,
  CyclicStructure,
  UnknownAtom,
  DuplicateAtom,
  InvalidArgument,
  ZeroMass,
  GenerationOutOfRange,
  NumericalFailure,
  BudgetExceeded,
  UnsupportedSize,
  DomainError,
  SamplerEmpty,
  DegenerateMeasure,
  EpsilonOutOfRange,
  ParseError,
  FileNotFound,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this exception; `kind()` is the
// machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace haarlab
