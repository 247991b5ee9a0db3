#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trackfold {

enum class Errc {
  ZeroNorm,
  NegativeComponent,
  DimensionMismatch,
  EmptyTrack,
  LengthMismatch,
  MethodMismatch,
  DuplicateTrack,
  MissingPosteriors,
  MissingLabel,
  DegenerateLabels,
  UnknownTrack,
  InsufficientTracks,
  InvalidConfig,
  DuplicateFrame,
  ParseError,
  IoError,
};

const char* errc_name(Errc code);

// All recoverable failures carry a code plus a human-readable message.
// File readers additionally set the 1-based line number of the offending row.
class TrackError : public std::runtime_error {
 public:
  TrackError(Errc code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(line == 0 ? std::string(errc_name(code)) + ": " + message
                                     : std::string(errc_name(code)) + " (line " +
                                           std::to_string(line) + "): " + message),
        code_(code),
        line_(line) {}

  Errc code() const { return code_; }
  std::size_t line() const { return line_; }

 private:
  Errc code_;
  std::size_t line_;
};

}  // namespace trackfold
