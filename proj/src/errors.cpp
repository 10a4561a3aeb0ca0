#include "nilgraph/errors.hpp"

namespace nilgraph {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::SubgroupNotInGroup: return "SubgroupNotInGroup";
    case ErrorCode::IdentityInGenerators: return "IdentityInGenerators";
    case ErrorCode::InvolutionInGenerators: return "InvolutionInGenerators";
    case ErrorCode::DuplicateGenerator: return "DuplicateGenerator";
    case ErrorCode::GeneratorsDoNotGenerate: return "GeneratorsDoNotGenerate";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NoAdmissibleLabel: return "NoAdmissibleLabel";
    case ErrorCode::AllZeroTAssignment: return "AllZeroTAssignment";
    case ErrorCode::InvalidTAssignment: return "InvalidTAssignment";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::NoOrthogonalElement: return "NoOrthogonalElement";
    case ErrorCode::IsometryCheckFailed: return "IsometryCheckFailed";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotBlockRespecting: return "NotBlockRespecting";
    case ErrorCode::SpecSyntax: return "SpecSyntax";
    case ErrorCode::SpecSchema: return "SpecSchema";
    case ErrorCode::AdjointMismatch: return "AdjointMismatch";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
  }
  return "Unknown";
}

bool is_internal(ErrorCode code) {
  return code == ErrorCode::AdjointMismatch ||
         code == ErrorCode::JacobiViolation;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace nilgraph
