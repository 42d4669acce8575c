#pragma once

namespace innerlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace innerlab
