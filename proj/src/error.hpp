#pragma once

#include <stdexcept>
#include <string>

namespace kpkit {

enum class ErrorCode {
  InvalidArgument = 1,
  Io,
  Parse,
  Empty,
  NoNegatives,
  IdMismatch,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kpkit
