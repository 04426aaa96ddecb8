#pragma once

#include <stdexcept>
#include <string>

namespace mpllab {

enum class ErrorCode {
  DisconnectedGraph,
  SelfLoop,
  DuplicateEdge,
  NonpositiveConductance,
  VertexOutOfRange,
  InvalidArgument,
  TooFewVertices,
  SameVertex,
  SingularSystem,
  ProblemTooLarge,
  SpaceMismatch,
  StateSpaceTooLarge,
  ZeroEnergy,
  DegenerateDenominator,
  NoPath,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpllab
