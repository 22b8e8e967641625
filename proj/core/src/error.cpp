#include "dseqmark/error.hpp"

namespace dseqmark {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::UnwritableDestination: return "UnwritableDestination";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MaxvalNot255: return "MaxvalNot255";
    case ErrorCode::EmptyBitmap: return "EmptyBitmap";
    case ErrorCode::DimensionsNotBlockAligned: return "DimensionsNotBlockAligned";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::QisTwo: return "QisTwo";
    case ErrorCode::KeyOutOfRange: return "KeyOutOfRange";
    case ErrorCode::InvalidDetectorParameters: return "InvalidDetectorParameters";
    case ErrorCode::InvalidRow: return "InvalidRow";
    case ErrorCode::QualityOutOfRange: return "QualityOutOfRange";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::InvalidAttackSpec: return "InvalidAttackSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingSize: return "MissingSize";
    case ErrorCode::EmptySweep: return "EmptySweep";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_io_error(ErrorCode code) noexcept {
  return code == ErrorCode::UnreadableFile || code == ErrorCode::UnwritableDestination;
}

}  // namespace dseqmark
