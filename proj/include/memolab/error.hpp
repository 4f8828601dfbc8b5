#pragma once

#include <stdexcept>
#include <string>

namespace memolab {

// Error carrying a stable machine-readable code ("horizon-insufficient",
// "bounded-loss", ...) next to the human-readable message.
class LabError : public std::runtime_error {
 public:
  LabError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kHorizonInsufficient = "horizon-insufficient";
inline constexpr const char* kBoundedLoss = "bounded-loss";
inline constexpr const char* kFiniteSupportProcess = "finite-support-process";
inline constexpr const char* kCoverTooSmall = "cover-too-small";
inline constexpr const char* kHypothesisViolated = "hypothesis-violated";
inline constexpr const char* kTestNonconvergent = "test-nonconvergent";
inline constexpr const char* kConfigInvalid = "config-invalid";
inline constexpr const char* kTrialsInsufficient = "trials-insufficient";
inline constexpr const char* kPartitionTooLarge = "partition-too-large";
inline constexpr const char* kInvalidArgument = "invalid-argument";
}  // namespace errc

}  // namespace memolab
