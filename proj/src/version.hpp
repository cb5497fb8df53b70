#pragma once

namespace plaser {

inline constexpr const char* tool_name = "plaser";
inline constexpr const char* tool_version = "0.1.0";

}  // namespace plaser
