#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvpair {

enum class ErrorCode {
  TolNotMet,
  NoCertificate,
  TRange,
  InvalidCantorOverlap,
  LocatorMiss,
  SelectionMismatch,
  JumpsTooClose,
  SampleOutside,
  ParseError,
  ValidationError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bvpair
