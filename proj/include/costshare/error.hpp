#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace costshare {

enum class ErrorCode {
  kMalformedLp,
  kNotOptimal,
  kParseError,
  kValidationError,
  kUnknownLabel,
  kPathLimitExceeded,
  kScaleExceeded,
  kUnsupportedFamily,
  kNotMstGame,
  kCoreRequired,
  kNotStar,
  kInvalidWitness,
  kNotSe,
  kNotMetric,
  kUnknownFixture,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; the code is what callers
// (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace costshare
