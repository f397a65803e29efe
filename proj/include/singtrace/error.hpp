#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace singtrace {

enum class ErrorCode : std::uint8_t {
  kInvalidArgument,
  kNonFiniteValue,
  kNonMonotone,        // head or step values not non-increasing
  kTailContinuity,     // tail does not continue the head monotonically
  kSchema,             // malformed file / unknown key / wrong type
  kIo,
  kDivergent,          // quantity diverges on the requested input
  kDomainMismatch,     // transform applied on the wrong domain
  kGridTooShort,
  kHypothesis,         // operation precondition on psi or input not met
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, for validation errors,
/// the 1-based index of the offending element.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace singtrace
