#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netcascade {

enum class ErrorCode {
  InvalidBlock,
  InvalidArgument,
  SingularMatrix,
  SingularInteraction,
  UnknownPortSet,
  InvalidReference,
  DeltaLikeSingularity,
  PortSetMismatch,
  InvalidScheme,
  InvalidReduction,
  InvalidEpsilon,
  PortOrderMismatch,
  SingularUpdate,
  InvalidUpdate,
  ResonantBond,
  ResonantGraph,
  InvalidGluing,
  InvalidSubset,
  GenerationFailed,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// True for failures of the numerics (as opposed to malformed input).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<double> condition = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // Pivot-ratio condition estimate when the failure came from a factorization.
  std::optional<double> condition() const noexcept { return condition_; }

 private:
  ErrorCode code_;
  std::optional<double> condition_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace netcascade
