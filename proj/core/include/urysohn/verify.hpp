#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace urysohn {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string witness;  // empty when passed
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckResult> checks;
  std::chrono::nanoseconds elapsed{0};

  bool passed() const;
  nlohmann::json to_json() const;
  std::string text() const;
};

/// Replays every identity a certificate (or plain structure) claims from
/// its raw serialized data. Derived fields stored in the blob are compared
/// against recomputed values, never trusted. Malformed blobs and unknown
/// kinds raise parse errors.
VerificationReport verify_certificate(const nlohmann::json& blob);

/// Worker count for independent checks: URYSOHN_FORGE_THREADS if set to a
/// positive integer, otherwise the hardware concurrency.
std::size_t verification_threads();

}  // namespace urysohn
