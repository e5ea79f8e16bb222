#pragma once

#include <stdexcept>
#include <string>

namespace tg {

enum class Errc {
  SyntaxError,
  CoordOutOfRange,
  DimensionMismatch,
  InvalidArgument,
  EpsilonOutOfRange,
  NotComposable,
  MixedEpsilon,
  DegenerateSecant,
  EpsilonOverflow,
  GridMismatch,
  EpsilonMismatch,
  ZeroDeformation,
  ZeroPoint,
  DegenerateQ,
  ConfigError,
  IoError,
};

/// Error type shared by every module; `code()` identifies the failure class,
/// `offset()` is a byte position for parse errors (-1 otherwise).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, long offset = -1)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  Errc code() const { return code_; }
  long offset() const { return offset_; }

 private:
  Errc code_;
  long offset_;
};

}  // namespace tg
