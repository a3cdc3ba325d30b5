#pragma once

namespace vise {

inline constexpr const char* version = "0.1.0";

}  // namespace vise
