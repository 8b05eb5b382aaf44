#pragma once

namespace srgbm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace srgbm
