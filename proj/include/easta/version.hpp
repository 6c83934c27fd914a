#pragma once

namespace easta {

inline constexpr const char* kVersion = "0.1.0";

} // namespace easta
