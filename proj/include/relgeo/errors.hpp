#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relgeo {

enum class ErrorKind {
  kInvalidArgument,
  kAngleOutOfRange,
  kLogUndefined,
  kUnsupportedSpec,
  kDegenerateTangent,
  kParseError,
  kTooFewPoints,
  kNotNormalized,
  kRootFindFailed,
  kSingularVariation,
  kNoConvergence,
  kNoCandidates,
  kAngleGap,
  kPreconditionViolated,
  kNoRootFound,
  kMaxIterations,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error raised at a specific sample index (step solver, morphing, parsing).
class IndexedError : public Error {
 public:
  IndexedError(ErrorKind kind, std::size_t index, const std::string& what)
      : Error(kind, what + " (index " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace relgeo
