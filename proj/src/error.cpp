#include "skillbench/error.hpp"

namespace skillbench {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::bounds: return "bounds";
    case ErrorCode::data: return "data";
    case ErrorCode::parse: return "parse";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::missing_backend: return "missing_backend";
    case ErrorCode::backend_load: return "backend_load";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::unsupported_operator: return "unsupported_operator";
    case ErrorCode::backend_failure: return "backend_failure";
    case ErrorCode::domain: return "domain";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace skillbench
