#pragma once

namespace bapfactor {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kPrngName = "mt19937_64";

}  // namespace bapfactor
