#pragma once

namespace ferroq {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ferroq
