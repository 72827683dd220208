#include "rhetor/errors.hpp"

namespace rhetor {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateMode: return "DuplicateMode";
    case ErrorKind::BadConstituent: return "BadConstituent";
    case ErrorKind::UnknownMode: return "UnknownMode";
    case ErrorKind::NotDiatomic: return "NotDiatomic";
    case ErrorKind::NotAtomic: return "NotAtomic";
    case ErrorKind::SelfUnite: return "SelfUnite";
    case ErrorKind::NoDual: return "NoDual";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadCapacity: return "BadCapacity";
    case ErrorKind::BadCount: return "BadCount";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::UnknownProfile: return "UnknownProfile";
    case ErrorKind::BadEdge: return "BadEdge";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::BadComposition: return "BadComposition";
    case ErrorKind::EmptySegment: return "EmptySegment";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::UnmappedStage: return "UnmappedStage";
    case ErrorKind::NotEnoughStages: return "NotEnoughStages";
    case ErrorKind::BadSchedule: return "BadSchedule";
  }
  return "Error";
}

namespace {

std::string compose_what(ErrorKind kind, const std::string& message,
                         const std::optional<std::size_t>& line) {
  std::string out(kind_name(kind));
  out += ": ";
  if (line) out += "line " + std::to_string(*line) + ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::optional<std::size_t> line,
             std::vector<std::string> suggestions)
    : std::runtime_error(compose_what(kind, message, line)),
      kind_(kind),
      message_(std::move(message)),
      line_(line),
      suggestions_(std::move(suggestions)) {}

}  // namespace rhetor
