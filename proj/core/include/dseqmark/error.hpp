#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dseqmark {

enum class ErrorCode {
  // I/O
  UnreadableFile,
  UnwritableDestination,
  // format / validation
  UnsupportedFormat,
  MaxvalNot255,
  EmptyBitmap,
  DimensionsNotBlockAligned,
  DimensionMismatch,
  GeometryMismatch,
  NotPrime,
  QisTwo,
  KeyOutOfRange,
  InvalidDetectorParameters,
  InvalidRow,
  QualityOutOfRange,
  EvenWindow,
  InvalidAttackSpec,
  InvalidArgument,
  MissingSize,
  EmptySweep,
  // broken internal invariant
  Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the codes that stem from the filesystem rather than from bad input.
bool is_io_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dseqmark
