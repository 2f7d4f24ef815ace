#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ool {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  NotPSD,
  ShapeMismatch,
  SpaceMismatch,
  NotSquareLevel,
  NotPositive,
  NotUnitNorm,
  NotMember,
  NotProjection,
  PreconditionFailed,
  HypothesisUnmet,
  ZeroProjection,
  LevelTooLarge,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this type; `kind()` is stable
/// and the message carries the offending shapes or values.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::NotSquareLevel: return "NotSquareLevel";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotUnitNorm: return "NotUnitNorm";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::ZeroProjection: return "ZeroProjection";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace ool
