#pragma once

namespace rssiloc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rssiloc
