#pragma once

#include <stdexcept>
#include <string>

namespace graphfactor {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kEmptyGraph,
  kDimensionMismatch,
  kMemoryCap,
  kZeroDegree,
  kInsufficientPairs,
  kNumeric,
};

// All library failures are reported through this type; the C API maps
// code() onto gf_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace graphfactor
