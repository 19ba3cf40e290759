#pragma once

namespace litkg {

inline constexpr const char* kToolName = "litkg";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace litkg
