#pragma once

namespace ntnsplit {

inline constexpr const char* kToolName = "ntnsplit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ntnsplit
