#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conesynth {

enum class ErrorCode {
  NonScalarLeadingTerm,
  SingularLeadingTerm,
  IndexOutOfBox,
  UnsupportedInnerStructure,
  NotCone,
  NotRealizableAsLCausal,
  SingularD,
  DimensionMismatch,
  AlgebraicLoop,
  IllPosedFeedback,
  WraparoundRisk,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `where` names the operation that
// raised it so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string where, const std::string& message)
      : std::runtime_error(std::string(where) + ": " + message),
        code_(code),
        where_(std::move(where)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string where_;
};

}  // namespace conesynth
