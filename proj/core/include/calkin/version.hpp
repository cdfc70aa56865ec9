#pragma once

namespace calkin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace calkin
