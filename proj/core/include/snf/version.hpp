#pragma once

namespace snf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace snf
