#pragma once

namespace aoimf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aoimf
