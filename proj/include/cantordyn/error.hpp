#pragma once

#include <stdexcept>
#include <string>

namespace cantordyn {

enum class ErrorCode {
  kInvalidArgument,
  kDepthExceeded,
  kModulusExhausted,
  kHorizonExhausted,
  kEmptyClass,
  kMalformedTree,
  kUnsupportedKind,
  kColumnMismatch,
  kUndecidedAtDepth,
  kDepthInsufficient,
  kInconsistentDepth,
  kParseError,
};

const char* error_code_name(ErrorCode code);

class CantorError : public std::runtime_error {
 public:
  CantorError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cantordyn
