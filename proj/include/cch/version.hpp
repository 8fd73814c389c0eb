#pragma once

namespace cch {

inline constexpr const char* kToolName = "cch";
inline constexpr const char* kToolVersion = "0.1.0";

// bumped whenever an artifact document layout changes incompatibly
inline constexpr int kFormatVersion = 1;

}  // namespace cch
