#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wqed {

enum class ErrorCode {
  InvalidConfig,
  InvalidArgument,
  PoleAtK,
  ChiralNoGap,
  DegenerateOmega,
  NoConvergence,
  PoleAtZ,
  NotBoundCandidate,
  NoBoundState,
  NotInGap,
  NotRealizable,
  NotChiral,
  NotResonanceCandidate,
  SingularSystem,
  EmptyRange,
  DivergentAnsatz,
  UsageError,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

// Failures that come from the numerics rather than from the inputs. The CLI
// treats these as fatal only under --strict.
constexpr bool is_numerical_failure(ErrorCode code) {
  return code == ErrorCode::NoConvergence || code == ErrorCode::SingularSystem;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wqed
