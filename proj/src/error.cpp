#include "kato/error.hpp"

namespace kato {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotSharp: return "NotSharp";
    case ErrorKind::RelationInconsistent: return "RelationInconsistent";
    case ErrorKind::RelationsIncomplete: return "RelationsIncomplete";
    case ErrorKind::SaturationFailure: return "SaturationFailure";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::NotOnVariety: return "NotOnVariety";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ToleranceBreach: return "ToleranceBreach";
    case ErrorKind::FiberCardinalityMismatch: return "FiberCardinalityMismatch";
    case ErrorKind::StratumEmptyAtDeskScale: return "StratumEmptyAtDeskScale";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace kato
