#include "error.hpp"

namespace kpkit {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "invalid_argument";
    case ErrorCode::Io:
      return "io";
    case ErrorCode::Parse:
      return "parse";
    case ErrorCode::Empty:
      return "empty";
    case ErrorCode::NoNegatives:
      return "no_negatives";
    case ErrorCode::IdMismatch:
      return "id_mismatch";
    case ErrorCode::Internal:
      break;
  }
  return "internal";
}

}  // namespace kpkit
