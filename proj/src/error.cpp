#include "gaitsym/error.hpp"

namespace gaitsym {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::InsufficientFrames: return "InsufficientFrames";
    case ErrorCode::DelayTooLarge: return "DelayTooLarge";
    case ErrorCode::InvalidDelay: return "InvalidDelay";
    case ErrorCode::SingleClass: return "SingleClassError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Format: return "FormatError";
  }
  return "Unknown";
}

}  // namespace gaitsym
