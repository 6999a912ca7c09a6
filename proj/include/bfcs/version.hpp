#pragma once

namespace bfcs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bfcs
