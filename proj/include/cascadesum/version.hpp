#pragma once

namespace cascadesum {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cascadesum
