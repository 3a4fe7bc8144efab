#pragma once

#include <stdexcept>
#include <string>

namespace pacp {

enum class ErrorKind {
  MalformedLog,
  TargetTooLarge,
  WrongOutDegree,
  MissingRow,
  SupportViolation,
  DomainError,
  NoInteriorRoot,
  PreconditionViolated,
  UnsupportedRegime,
  UndefinedWeight,
};

const char* error_kind_name(ErrorKind kind) noexcept;

// Single exception type for all library failures; the kind selects the
// structured error code surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedLog: return "MalformedLog";
    case ErrorKind::TargetTooLarge: return "TargetTooLarge";
    case ErrorKind::WrongOutDegree: return "WrongOutDegree";
    case ErrorKind::MissingRow: return "MissingRow";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoInteriorRoot: return "NoInteriorRoot";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorKind::UndefinedWeight: return "UndefinedWeight";
  }
  return "Unknown";
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace pacp
