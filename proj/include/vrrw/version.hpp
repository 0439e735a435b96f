#pragma once

namespace vrrw {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Identifier of the replica RNG construction, recorded in run manifests.
inline constexpr const char* kRngAlgorithm = "splitmix64-ctr/streamkey-v1";

}  // namespace vrrw
