#pragma once

#include <stdexcept>
#include <string>

namespace nilgraph {

enum class ErrorCode {
  InvalidArgument,
  InvalidPermutation,
  DegreeMismatch,
  CapExceeded,
  SubgroupNotInGroup,
  IdentityInGenerators,
  InvolutionInGenerators,
  DuplicateGenerator,
  GeneratorsDoNotGenerate,
  UnknownLabel,
  NoAdmissibleLabel,
  AllZeroTAssignment,
  InvalidTAssignment,
  DimensionMismatch,
  IndexMismatch,
  NoOrthogonalElement,
  IsometryCheckFailed,
  NotOrthogonal,
  NotBlockRespecting,
  SpecSyntax,
  SpecSchema,
  // Internal assertions: these signal a bug, never bad input.
  AdjointMismatch,
  JacobiViolation,
};

const char* to_string(ErrorCode code);

/// True for codes that indicate a broken internal invariant rather than a
/// rejected input.
bool is_internal(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace nilgraph
