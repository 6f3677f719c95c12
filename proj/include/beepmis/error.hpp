#pragma once

#include <stdexcept>
#include <string>

namespace beepmis {

enum class ErrorCode {
  ENDPOINT_OUT_OF_RANGE,
  SELF_LOOP,
  DUPLICATE_EDGE,
  INVALID_SPEC,
  VERTEX_OUT_OF_RANGE,
  C1_TOO_SMALL,
  EXPLICIT_LENGTH_MISMATCH,
  LEVEL_OUT_OF_RANGE,
  CH2_CONSISTENCY,
  EXPLICIT_OUT_OF_RANGE,
  CONFIG_INVALID,
  TARGET_OUT_OF_RANGE,
  NOT_STABLE,
  TRACE_WINDOW_MISSING,
  PRECONDITION,
  PARSE,
  IO,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ENDPOINT_OUT_OF_RANGE: return "ENDPOINT_OUT_OF_RANGE";
    case ErrorCode::SELF_LOOP: return "SELF_LOOP";
    case ErrorCode::DUPLICATE_EDGE: return "DUPLICATE_EDGE";
    case ErrorCode::INVALID_SPEC: return "INVALID_SPEC";
    case ErrorCode::VERTEX_OUT_OF_RANGE: return "VERTEX_OUT_OF_RANGE";
    case ErrorCode::C1_TOO_SMALL: return "C1_TOO_SMALL";
    case ErrorCode::EXPLICIT_LENGTH_MISMATCH: return "EXPLICIT_LENGTH_MISMATCH";
    case ErrorCode::LEVEL_OUT_OF_RANGE: return "LEVEL_OUT_OF_RANGE";
    case ErrorCode::CH2_CONSISTENCY: return "CH2_CONSISTENCY";
    case ErrorCode::EXPLICIT_OUT_OF_RANGE: return "EXPLICIT_OUT_OF_RANGE";
    case ErrorCode::CONFIG_INVALID: return "CONFIG_INVALID";
    case ErrorCode::TARGET_OUT_OF_RANGE: return "TARGET_OUT_OF_RANGE";
    case ErrorCode::NOT_STABLE: return "NOT_STABLE";
    case ErrorCode::TRACE_WINDOW_MISSING: return "TRACE_WINDOW_MISSING";
    case ErrorCode::PRECONDITION: return "PRECONDITION";
    case ErrorCode::PARSE: return "PARSE";
    case ErrorCode::IO: return "IO";
  }
  return "UNKNOWN";
}

// Typed runtime error: the code is the machine-readable contract, the message
// is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace beepmis
