#pragma once

namespace gravbell {

inline constexpr const char* kToolName = "gravbell";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace gravbell
