#pragma once

namespace floq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace floq
