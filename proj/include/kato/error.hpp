#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kato {

enum class ErrorKind {
  InvalidArgument,
  NotSharp,
  RelationInconsistent,
  RelationsIncomplete,
  SaturationFailure,
  NotAFace,
  NotOnVariety,
  InvalidPoint,
  ArityMismatch,
  ToleranceBreach,
  FiberCardinalityMismatch,
  StratumEmptyAtDeskScale,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kato
