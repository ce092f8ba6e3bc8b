#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forestlab {

enum class ErrorCode {
  invalid_argument,
  precondition,
  disconnected,
  cap_exceeded,
  edge_present,
  edge_absent,
  same_cluster,
  condition_d_failed,
  internal,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every recoverable failure in the library. The code
/// lets callers (and the CLI exit-status mapping) tell failure kinds apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace forestlab
