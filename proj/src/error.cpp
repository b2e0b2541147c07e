#include "haarlab/error.hpp"

namespace haarlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorKind::MassMismatch: return "MassMismatch";
    case ErrorKind::CyclicStructure: return "CyclicStructure";
    case ErrorKind::UnknownAtom: return "UnknownAtom";
    case ErrorKind::DuplicateAtom: return "DuplicateAtom";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::GenerationOutOfRange: return "GenerationOutOfRange";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnsupportedSize: return "UnsupportedSize";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SamplerEmpty: return "SamplerEmpty";
    case ErrorKind::DegenerateMeasure: return "DegenerateMeasure";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FileNotFound: return "FileNotFound";
  }
  return "Unknown";
}

}  // namespace haarlab
