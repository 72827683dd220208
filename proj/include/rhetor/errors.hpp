#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rhetor {

enum class ErrorKind {
  ParseError,
  DuplicateMode,
  BadConstituent,
  UnknownMode,
  NotDiatomic,
  NotAtomic,
  SelfUnite,
  NoDual,
  OutOfRange,
  BadCapacity,
  BadCount,
  BadDistribution,
  UnknownProfile,
  BadEdge,
  UnknownNode,
  BadComposition,
  EmptySegment,
  BadIndex,
  UnmappedStage,
  NotEnoughStages,
  BadSchedule,
};

std::string_view kind_name(ErrorKind kind) noexcept;

// Every library failure is an Error; the kind is the machine-readable part.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::optional<std::size_t> line = {},
        std::vector<std::string> suggestions = {});

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return kind_name(kind_); }
  const std::string& message() const noexcept { return message_; }
  // 1-based source line, when the error came from a document.
  std::optional<std::size_t> line() const noexcept { return line_; }
  // Nearest known names, filled for UnknownMode.
  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::optional<std::size_t> line_;
  std::vector<std::string> suggestions_;
};

}  // namespace rhetor
