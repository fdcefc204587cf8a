#pragma once

namespace scat1d {

inline constexpr const char* kToolName = "scat1d";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace scat1d
