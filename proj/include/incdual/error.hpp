#pragma once

#include <stdexcept>
#include <string>

namespace incdual {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  kDimensionMismatch = 1,
  kInvalidArgument,
  kUnsupported,
  kNotInDomain,
  kIndeterminate,  // (+inf) + (-inf)
  kBudgetExceeded,
  kParse,
  kSchema,
  kSemantic,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require_dim(long got, long want, const char* context) {
  if (got != want) {
    fail(ErrorCode::kDimensionMismatch, std::string(context) + ": dimension " + std::to_string(got) +
                                            ", expected " + std::to_string(want));
  }
}

}  // namespace incdual
