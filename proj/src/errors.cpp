#include "conesynth/errors.hpp"

namespace conesynth {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonScalarLeadingTerm: return "NonScalarLeadingTerm";
    case ErrorCode::SingularLeadingTerm: return "SingularLeadingTerm";
    case ErrorCode::IndexOutOfBox: return "IndexOutOfBox";
    case ErrorCode::UnsupportedInnerStructure: return "UnsupportedInnerStructure";
    case ErrorCode::NotCone: return "NotCone";
    case ErrorCode::NotRealizableAsLCausal: return "NotRealizableAsLCausal";
    case ErrorCode::SingularD: return "SingularD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlgebraicLoop: return "AlgebraicLoop";
    case ErrorCode::IllPosedFeedback: return "IllPosedFeedback";
    case ErrorCode::WraparoundRisk: return "WraparoundRisk";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace conesynth
