#pragma once

#include <stdexcept>
#include <string>

namespace ehe {

enum class ErrorCode {
  kDimension,
  kParameter,
  kBadMagic,
  kBadVersion,
  kWrongKind,
  kTruncated,
  kCorrupt,
  kSampling,
  kKeygen,
  kBudget,
  kIo,
};

const char* error_code_name(ErrorCode code);

// Process exit status for a given error: 2 usage, 3 format, 4 contract, 5 budget/keygen.
int exit_status(ErrorCode code);

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

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ehe
