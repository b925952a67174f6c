#pragma once

#include <stdexcept>
#include <string>

namespace skillbench {

enum class ErrorCode {
  argument,
  bounds,
  data,
  parse,
  config,
  io,
  missing_backend,
  backend_load,
  shape_mismatch,
  unsupported_operator,
  backend_failure,
  domain,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C API and the CLI can map it onto a status or an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skillbench
